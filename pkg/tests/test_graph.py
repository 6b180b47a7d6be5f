import json
import re
import math
from itertools import combinations

import numpy as np
import pytest

from hurwitz_residues.graph import (
    EdgeRule,
    LayoutMethod,
    build_graph,
    export,
    graph_from_json,
    spiral_layout,
    spring_layout,
)
from hurwitz_residues.modulo import PrimeModulus, ResidueTable, residue_table
from hurwitz_residues.quaternion import parse_quaternion, units


def table(text: str) -> ResidueTable:
    return residue_table(PrimeModulus(parse_quaternion(text)))


@pytest.fixture(scope="module")
def t13():
    return table("5/2+3/2i+3/2j+3/2k")


def test_edge_counts(t13):
    assert len(build_graph(t13, EdgeRule.Cycle).edges) == 13
    assert len(build_graph(t13, EdgeRule.Complete).edges) == 78


@pytest.mark.parametrize("alpha", ["3+2i", "5/2+3/2i+3/2j+3/2k", "3+i+j"])
def test_unit_difference_edges_by_brute_force(alpha):
    t = table(alpha)
    g = build_graph(t, EdgeRule.UnitDifference)
    res, us = t.residues, units()
    expected = {(u, v) for u, v in combinations(range(len(t)), 2)
                if any(res[u] - res[v] == e for e in us)}
    assert set(g.edges) == expected
    assert len(g.edges) == len(expected)


def test_3_plus_2i_unit_graph():
    # the residues of 3+2i are Gaussian integers; unit differences are the grid neighbours
    assert len(build_graph(table("3+2i"), EdgeRule.UnitDifference).edges) == 16


def test_graph_invariants(t13):
    for rule in EdgeRule:
        g = build_graph(t13, rule)
        assert all(u < v for u, v in g.edges)
        assert len(set(g.edges)) == len(g.edges)


def test_small_cycles():
    t = table("1+i")
    assert build_graph(t, EdgeRule.Cycle).edges == ((0, 1),)
    one = ResidueTable(t.modulus, t.entries[:1])
    assert build_graph(one, EdgeRule.Cycle).edges == ()
    with pytest.raises(ValueError):
        build_graph(ResidueTable(t.modulus, ()), EdgeRule.Cycle)


def test_single_vertex_layout():
    t = table("1+i")
    g = build_graph(ResidueTable(t.modulus, t.entries[:1]), EdgeRule.Cycle)
    lay = spring_layout(g, dims=2, seed=5)
    assert lay.coords == ((0.0, 0.0),) and lay.residual == 0.0


@pytest.mark.parametrize("seed", [0, 1, 2, 17])
def test_two_vertex_equilibrium(seed):
    t = table("1+i")
    g = build_graph(t, EdgeRule.Cycle)
    for dims in (2, 3):
        lay = spring_layout(g, dims=dims, seed=seed, tol=1e-10)
        a = lay.array()
        assert abs(np.linalg.norm(a[0] - a[1]) - 1.0) <= 1e-6
        assert lay.residual <= 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_ring_is_round(t13, seed):
    lay = spring_layout(build_graph(t13, EdgeRule.Cycle), dims=2, seed=seed)
    a = lay.array()
    r = np.linalg.norm(a - a.mean(axis=0), axis=1)
    assert r.min() >= 0.95 * r.max()
    assert lay.residual <= 1e-9


def test_spring_is_deterministic(t13):
    g = build_graph(t13, EdgeRule.UnitDifference)
    for dims in (2, 3):
        assert spring_layout(g, dims, seed=4) == spring_layout(g, dims, seed=4)
    assert spring_layout(g, 2, seed=4).coords != spring_layout(g, 2, seed=5).coords


def test_spring_translation_invariance(t13):
    g = build_graph(t13, EdgeRule.Cycle)
    rng = np.random.default_rng(11)
    start = rng.normal(size=(13, 2))
    shift = np.array([3.5, -2.25])
    a = spring_layout(g, 2, initial=start).array()
    b = spring_layout(g, 2, initial=start + shift).array()
    assert np.allclose(b - shift, a, atol=1e-6)


def test_spring_reports_non_convergence(t13):
    lay = spring_layout(build_graph(t13, EdgeRule.Complete), 2, max_iters=2, tol=1e-14)
    assert lay.residual > 1e-14 and lay.iterations <= 2 + 1


def test_spiral_endpoints():
    t = table("1+i")
    g = build_graph(t, EdgeRule.Cycle)
    lay = spiral_layout(g, turns=1.0)
    assert lay.coords[0] == (1.0, 0.0, 0.0)
    assert np.allclose(lay.coords[1], (1.0, 0.0, 1.0), atol=1e-12)
    one = build_graph(ResidueTable(t.modulus, t.entries[:1]), EdgeRule.Cycle)
    assert spiral_layout(one).coords == ((1.0, 0.0, 0.0),)


@pytest.mark.parametrize("dims", [2, 3])
def test_spiral_spacing(t13, dims):
    lay = spiral_layout(build_graph(t13, EdgeRule.Cycle), turns=2.0, dims=dims)
    a = lay.array()
    gaps = np.linalg.norm(np.diff(a, axis=0), axis=1)
    assert gaps.max() - gaps.min() <= 1e-9
    assert lay.method is LayoutMethod.Spiral


def test_json_round_trip(t13):
    for rule in EdgeRule:
        g = build_graph(t13, rule)
        for lay in (None, spring_layout(g, 2, seed=3), spring_layout(g, 3, seed=3),
                    spiral_layout(g, 1.5, 3)):
            g2, lay2 = graph_from_json(export(g, lay, "json").decode())
            assert g2 == g
            assert lay2 == lay


def test_json_schema_without_layout(t13):
    t = ResidueTable(t13.modulus, t13.entries[:1])
    data = json.loads(export(build_graph(t, EdgeRule.Cycle), None, "json"))
    assert data["vertices"] == [{"z": 0, "residue": "0"}]
    assert data["edges"] == []
    assert "method" not in data


def test_json_import_checks_residues(t13):
    data = json.loads(export(build_graph(t13), None, "json"))
    data["vertices"][3]["residue"] = "1"
    with pytest.raises(ValueError):
        graph_from_json(json.dumps(data))


def test_dot_export(t13):
    g = build_graph(t13, EdgeRule.Cycle)
    text = export(g, spring_layout(g, 2), "dot").decode()
    lines = text.splitlines()
    assert sum("[label=" in ln for ln in lines) == 13
    assert sum(" -- " in ln for ln in lines) == 13
    assert 'n2 [label="2: -3/2+1/2i+1/2j+1/2k"' in text


def test_csv_export(t13):
    g = build_graph(t13)
    rows = export(g, spiral_layout(g, 2.0, 2), "csv").decode().splitlines()
    assert rows[0] == "z,residue,branch,x0,x1"
    assert len(rows) == 14
    assert rows[1].startswith("0,0,1,1.0,0.0")


def test_svg_export(t13):
    g = build_graph(t13)
    svg = export(g, spring_layout(g, 2), "svg").decode()
    assert 'viewBox="0 0 1000 1000"' in svg
    assert svg.count("<circle") == 13 and svg.count("<line") == 13
    assert svg == export(g, spring_layout(g, 2), "svg").decode()
    nums = [float(x) for x in re.findall(r'c[xy]="([-\d.]+)"', svg)]
    assert min(nums) >= 0 and max(nums) <= 1000
    with pytest.raises(ValueError):
        export(g, spiral_layout(g, 2.0, 3), "svg")
    with pytest.raises(ValueError):
        export(g, None, "svg")


def test_unknown_format(t13):
    with pytest.raises(ValueError):
        export(build_graph(t13), None, "png")


def test_layout_coords_finite(t13):
    g = build_graph(t13, EdgeRule.Complete)
    lay = spring_layout(g, 3, seed=9)
    assert all(math.isfinite(c) for p in lay.coords for c in p)
