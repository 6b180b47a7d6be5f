"""Graphs over residue tables, spring and spiral layouts, and exporters."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, root

from .modulo import PrimeModulus, ResidueEntry, ResidueTable, mu
from .quaternion import parse_quaternion, units

__all__ = [
    "EdgeRule",
    "LayoutMethod",
    "ConstellationGraph",
    "Layout",
    "build_graph",
    "spring_layout",
    "spiral_layout",
    "export",
    "graph_from_json",
]


class EdgeRule(enum.Enum):
    Cycle = "cycle"
    UnitDifference = "unit"
    Complete = "complete"


class LayoutMethod(enum.Enum):
    Spring = "spring"
    Spiral = "spiral"


@dataclass(frozen=True)
class ConstellationGraph:
    modulus: PrimeModulus
    vertices: tuple[ResidueEntry, ...]
    edges: tuple[tuple[int, int], ...]
    edge_rule: EdgeRule

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Layout:
    dims: int
    coords: tuple[tuple[float, ...], ...]
    method: LayoutMethod
    seed: int | None = None
    residual: float = 0.0
    iterations: int = 0

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float).reshape(len(self.coords), self.dims)


def _normalize_edges(pairs) -> tuple[tuple[int, int], ...]:
    return tuple(sorted({(min(u, v), max(u, v)) for u, v in pairs if u != v}))


def build_graph(table: ResidueTable, rule: EdgeRule = EdgeRule.Cycle) -> ConstellationGraph:
    n = len(table)
    if n == 0:
        raise ValueError("table is empty")
    if rule is EdgeRule.Cycle:
        pairs = [(z, (z + 1) % n) for z in range(n)]
    elif rule is EdgeRule.Complete:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    else:
        us = units()
        res = table.residues
        pairs = [
            (u, v) for u in range(n) for v in range(u + 1, n) if res[u] - res[v] in us
        ]
    return ConstellationGraph(table.modulus, tuple(table.entries), _normalize_edges(pairs), rule)


# -- layouts ---------------------------------------------------------------------


def _initial_positions(m: int, dims: int, seed: int) -> np.ndarray:
    if m == 1:
        return np.zeros((1, dims))
    rng = np.random.default_rng(seed)
    if dims == 2:
        # random points, handed out in angular order so a ring does not start knotted
        t = np.sort(rng.uniform(0.0, 2.0 * math.pi, m))
        return np.column_stack([np.cos(t), np.sin(t)])
    v = rng.normal(size=(m, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _energy_and_force(x, adj, rest, repulsion):
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(d, 1.0)
    nonadj = ~adj
    np.fill_diagonal(nonadj, False)
    energy = 0.5 * (0.5 * ((d - rest) ** 2)[adj].sum()) + 0.5 * (repulsion / d)[nonadj].sum()
    # force on i: -dE/dx_i
    coef = np.where(adj, -(d - rest) / d, 0.0) + np.where(nonadj, repulsion / d**3, 0.0)
    force = (coef[:, :, None] * diff).sum(axis=1)
    return energy, force


def spring_layout(
    g: ConstellationGraph,
    dims: int = 2,
    max_iters: int = 20000,
    tol: float = 1e-9,
    seed: int = 0,
    rest_length: float = 1.0,
    repulsion: float = 1.0,
    initial: np.ndarray | None = None,
) -> Layout:
    """Force-directed layout that minimises the spring energy.

    Edges are springs with the given rest length; non-adjacent pairs repel
    with an inverse-square force. Adjacent pairs do not repel, so a lone edge
    settles exactly at its rest length. The energy is minimised with L-BFGS,
    restarted until the largest per-vertex force is at most ``tol`` or
    ``max_iters`` iterations are spent.
    """
    if dims not in (2, 3):
        raise ValueError("dims must be 2 or 3")
    m = len(g)
    if m == 0:
        raise ValueError("graph is empty")
    x = (np.array(initial, dtype=float).reshape(m, dims) if initial is not None
         else _initial_positions(m, dims, seed))
    adj = np.zeros((m, m), dtype=bool)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = True

    def fun(flat):
        e, f = _energy_and_force(flat.reshape(m, dims), adj, rest_length, repulsion)
        return e, -f.ravel()

    it = 0
    residual = 0.0
    if m > 1:
        # restart L-BFGS until the force criterion holds; each run is capped
        while True:
            sol = minimize(fun, x.ravel(), jac=True, method="L-BFGS-B",
                           options={"maxiter": max_iters - it, "gtol": tol / 4, "ftol": 0.0,
                                    "maxcor": 20})
            prev = x
            x = sol.x.reshape(m, dims)
            it += max(int(sol.nit), 1)
            residual = float(np.linalg.norm(_energy_and_force(x, adj, rest_length,
                                                              repulsion)[1], axis=1).max())
            if residual <= tol or it >= max_iters or np.array_equal(prev, x):
                break
        if residual > tol and it < max_iters:
            # L-BFGS stalls near 1e-8 in float64; Levenberg-Marquardt on the
            # force field finishes the last digits from the minimiser's point
            x, residual, it = _polish(x, adj, rest_length, repulsion, residual, it, max_iters)
    return Layout(dims, tuple(tuple(map(float, row)) for row in x), LayoutMethod.Spring,
                  seed, residual, it)


def _polish(x, adj, rest_length, repulsion, residual, it, max_iters):
    m, dims = x.shape

    def force(flat):
        return _energy_and_force(flat.reshape(m, dims), adj, rest_length, repulsion)[1].ravel()

    sol = root(force, x.ravel(), method="lm",
               options={"xtol": 1e-15, "ftol": 1e-15, "maxiter": max_iters - it})
    y = sol.x.reshape(m, dims)
    res = float(np.linalg.norm(force(sol.x).reshape(m, dims), axis=1).max())
    if not np.all(np.isfinite(y)) or res >= residual:
        return x, residual, it + 1
    return y, res, it + 1


def spiral_layout(g: ConstellationGraph, turns: float = 2.0, dims: int = 3,
                  height: float = 1.0) -> Layout:
    """Vertices at equal parameter steps on a unit-radius helix.

    Vertex ``m`` of ``M`` sits at ``t = m/(M-1)``; the point is
    ``(cos 2*pi*turns*t, sin 2*pi*turns*t, height*t)``. The 2D variant drops
    the axis coordinate.
    """
    if dims not in (2, 3):
        raise ValueError("dims must be 2 or 3")
    m = len(g)
    if m == 0:
        raise ValueError("graph is empty")
    coords = []
    for v in range(m):
        t = v / (m - 1) if m > 1 else 0.0
        a = 2.0 * math.pi * turns * t
        p = (math.cos(a), math.sin(a), height * t)
        coords.append(p[:dims])
    return Layout(dims, tuple(coords), LayoutMethod.Spiral, None, 0.0, 0)


# -- export ----------------------------------------------------------------------


def _to_dict(g: ConstellationGraph, layout: Layout | None) -> dict:
    verts = []
    for i, e in enumerate(g.vertices):
        v: dict = {"z": e.z, "residue": str(e.residue)}
        if layout is not None:
            v["coords"] = list(layout.coords[i])
        verts.append(v)
    out: dict = {
        "alpha": str(g.modulus.alpha),
        "rule": g.edge_rule.value,
        "vertices": verts,
        "edges": [list(e) for e in g.edges],
    }
    if layout is not None:
        out["method"] = layout.method.value
        out["seed"] = layout.seed
        out["dims"] = layout.dims
        out["residual"] = layout.residual
        out["iterations"] = layout.iterations
    return out


def graph_from_json(text: str) -> tuple[ConstellationGraph, Layout | None]:
    """Inverse of ``export(..., "json")``; residues are recomputed and checked."""
    data = json.loads(text)
    m = PrimeModulus(parse_quaternion(data["alpha"]))
    entries = []
    for v in data["vertices"]:
        e = mu(m, int(v["z"]))
        if e.residue != parse_quaternion(v["residue"]):
            raise ValueError(f"vertex z={v['z']}: residue {v['residue']} does not match {e.residue}")
        entries.append(e)
    edges = tuple((int(u), int(w)) for u, w in data["edges"])
    if edges != _normalize_edges(edges):
        raise ValueError("edges are not in canonical sorted form")
    g = ConstellationGraph(m, tuple(entries), edges, EdgeRule(data["rule"]))
    layout = None
    if "method" in data:
        layout = Layout(
            int(data["dims"]),
            tuple(tuple(float(c) for c in v["coords"]) for v in data["vertices"]),
            LayoutMethod(data["method"]),
            data.get("seed"),
            float(data.get("residual", 0.0)),
            int(data.get("iterations", 0)),
        )
    return g, layout


def _dot(g: ConstellationGraph, layout: Layout | None) -> str:
    lines = ["graph residues {"]
    for i, e in enumerate(g.vertices):
        attrs = f'label="{e.z}: {e.residue}"'
        if layout is not None and layout.dims == 2:
            x, y = layout.coords[i]
            attrs += f', pos="{x:.6f},{y:.6f}!"'
        lines.append(f"  n{e.z} [{attrs}];")
    for u, v in g.edges:
        lines.append(f"  n{g.vertices[u].z} -- n{g.vertices[v].z};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _csv(g: ConstellationGraph, layout: Layout | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dims = layout.dims if layout is not None else 0
    w.writerow(["z", "residue", "branch"] + [f"x{d}" for d in range(dims)])
    for i, e in enumerate(g.vertices):
        row = [e.z, str(e.residue), e.branch]
        if layout is not None:
            row += [repr(c) for c in layout.coords[i]]
        w.writerow(row)
    return buf.getvalue()


def _svg(g: ConstellationGraph, layout: Layout | None) -> str:
    if layout is None or layout.dims != 2:
        raise ValueError("SVG export needs a 2D layout")
    size, margin = 1000.0, 50.0
    pts = layout.array()
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float((hi - lo).max()) or 1.0
    scale = (size - 2 * margin) / span
    centre = (lo + hi) / 2.0

    def place(p):
        x = size / 2 + (p[0] - centre[0]) * scale
        y = size / 2 - (p[1] - centre[1]) * scale
        return x, y

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="1000" height="1000" viewBox="0 0 1000 1000">',
        '  <g stroke="#555555" stroke-width="1.5">',
    ]
    for u, v in g.edges:
        (x1, y1), (x2, y2) = place(pts[u]), place(pts[v])
        out.append(f'    <line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
    out.append("  </g>")
    out.append('  <g fill="#1f4e9a" font-family="monospace" font-size="12">')
    for i, e in enumerate(g.vertices):
        x, y = place(pts[i])
        out.append(f'    <circle cx="{x:.3f}" cy="{y:.3f}" r="5"/>')
        out.append(f'    <text x="{x + 8:.3f}" y="{y - 8:.3f}">{e.z}: {e.residue}</text>')
    out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export(g: ConstellationGraph, layout: Layout | None = None, fmt: str = "json") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        text = json.dumps(_to_dict(g, layout), indent=2) + "\n"
    elif fmt == "dot":
        text = _dot(g, layout)
    elif fmt == "csv":
        text = _csv(g, layout)
    elif fmt == "svg":
        text = _svg(g, layout)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return text.encode("utf-8")
