"""Command-line entry point.

Exit status: 0 on success, 1 on bad invocation or input, 2 when a
verification oracle reports counterexamples.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analysis, graph, modulo
from .modulo import PrimeModulus
from .quaternion import HurwitzInt, ParityError, find_primes_with_norm, is_prime_int, parse_quaternion

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

# flag -> property groups it covers
VERIFY_GROUPS = {
    "thm2": ("residue_system",),
    "thm1": ("homomorphism",),
    "prop7": ("symmetry",),
    "cor1": ("two_component",),
}
ALL_GROUPS = ("residue_system", "homomorphism", "symmetry", "zero_anchor", "norm_anchor",
              "two_component", "min_rule")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise UsageError(message)


def _modulus(args) -> PrimeModulus:
    if args.alpha is not None and args.alpha2 is not None:
        raise UsageError("give either --alpha or --alpha2, not both")
    if args.alpha2 is not None:
        try:
            parts = [int(p) for p in args.alpha2.split(",")]
        except ValueError:
            raise UsageError(f"--alpha2 {args.alpha2!r}: expected four comma-separated integers")
        if len(parts) != 4:
            raise UsageError(f"--alpha2 {args.alpha2!r}: expected four comma-separated integers")
        try:
            alpha = HurwitzInt(*parts)
        except ParityError as e:
            raise UsageError(f"--alpha2 {args.alpha2!r}: {e}")
        text = args.alpha2
    elif args.alpha is not None:
        try:
            alpha = parse_quaternion(args.alpha)
        except ValueError as e:
            raise UsageError(f"--alpha {args.alpha!r}: {e}")
        text = args.alpha
    else:
        raise UsageError("a modulus is required (--alpha or --alpha2)")
    n = alpha.norm()
    if not is_prime_int(n):
        raise UsageError(f"modulus {text!r} has norm {n}, which is not prime")
    return PrimeModulus(alpha)


# -- subcommands -------------------------------------------------------------------


def _residues(args) -> tuple[str, int]:
    t = modulo.residue_table(_modulus(args))
    fmt = args.format or "text"
    if fmt == "json":
        return t.to_json(), EXIT_OK
    if fmt == "csv":
        return t.to_csv(), EXIT_OK
    if fmt != "text":
        raise UsageError(f"residues: unsupported --format {fmt}")
    rows = [("z", "branch", "residue", "N1", "N2", "mu1", "mu2")]
    for e in t:
        rows.append((str(e.z), str(e.branch), str(e.residue), str(e.norms[0]),
                     str(e.norms[1]), str(e.mu1), str(e.mu2)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = [f"modulus {t.modulus.alpha}, norm {t.modulus.n}"]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def _energy(args) -> tuple[str, int]:
    rep = analysis.average_energy(_modulus(args))
    fmt = args.format or "text"
    if fmt == "json":
        return rep.to_json(), EXIT_OK
    if fmt != "text":
        raise UsageError(f"energy: unsupported --format {fmt}")
    return rep.text() + "\n", EXIT_OK


def _table1(args) -> tuple[str, int]:
    if args.max_norm < 7:
        raise UsageError(f"--max-norm {args.max_norm}: must be at least 7")
    rows = analysis.table1(args.max_norm)
    fmt = args.format or "markdown"
    if fmt in ("markdown", "text"):
        return analysis.table1_markdown(rows), EXIT_OK
    if fmt == "csv":
        return analysis.table1_csv(rows), EXIT_OK
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2) + "\n", EXIT_OK
    raise UsageError(f"table1: unsupported --format {fmt}")


def _rate(args) -> tuple[str, int]:
    try:
        rep = analysis.code_rate(args.p, args.k)
    except ValueError as e:
        raise UsageError(f"--p {args.p}: {e}")
    fmt = args.format or "text"
    if fmt == "json":
        return rep.to_json(), EXIT_OK
    if fmt != "text":
        raise UsageError(f"rate: unsupported --format {fmt}")
    return rep.text() + "\n", EXIT_OK


def _graph(args) -> tuple[str, int]:
    m = _modulus(args)
    rule = {"cycle": graph.EdgeRule.Cycle, "unit": graph.EdgeRule.UnitDifference,
            "complete": graph.EdgeRule.Complete}[args.rule]
    g = graph.build_graph(modulo.residue_table(m), rule)
    if args.layout == "spring":
        lay = graph.spring_layout(g, args.dims, args.max_iters, args.tol, args.seed,
                                  args.rest_length, args.repulsion)
    else:
        lay = graph.spiral_layout(g, args.turns, args.dims)
    fmt = args.format or "json"
    if fmt not in ("dot", "json", "csv", "svg"):
        raise UsageError(f"graph: unsupported --format {fmt}")
    if fmt == "svg" and args.dims != 2:
        raise UsageError("graph: --format svg needs --dims 2")
    return graph.export(g, lay, fmt).decode("utf-8"), EXIT_OK


def _exact_reports(groups, bound: int) -> dict[str, dict]:
    """Pure rational-arithmetic route; slow, meant for small bounds."""
    moduli = [PrimeModulus(a) for n in range(2, bound + 1) if is_prime_int(n)
              for a in find_primes_with_norm(n)]
    out: dict[str, list] = {g: [0, 0, []] for g in groups}

    def fold(group, rep):
        if group in out:
            out[group][0] += rep.checked
            out[group][1] += rep.failures
            out[group][2].extend(rep.counterexamples[: 20 - len(out[group][2])])

    for m in moduli:
        table = modulo.ResidueTable(m, tuple(modulo.mu(m, z) for z in range(m.n)))
        if "residue_system" in out:
            fold("residue_system", modulo.verify_bijection(m, table))
        if "homomorphism" in out:
            fold("homomorphism", modulo.verify_homomorphism(m, table))
        if "symmetry" in out:
            fold("symmetry", modulo.verify_symmetry(m, table))
        if "zero_anchor" in out or "norm_anchor" in out:
            rep = modulo.verify_anchors(m)
            # three checks at z = 0, two at z = N
            for group, checks, at_zero in (("zero_anchor", 3, True), ("norm_anchor", 2, False)):
                if group in out:
                    bad = [w for w in rep.counterexamples if ("(0)" in w["kind"]) == at_zero]
                    out[group][0] += checks
                    out[group][1] += len(bad)
                    out[group][2].extend(bad[: 20 - len(out[group][2])])
        if "min_rule" in out:
            for e in table:
                out["min_rule"][0] += 1
                if e.residue.norm() != min(e.norms):
                    out["min_rule"][1] += 1
    if "two_component" in out:
        fold("two_component", modulo.verify_two_component_collapse(bound))
    return {g: {"checked": c, "failures": f, "witnesses": w} for g, (c, f, w) in out.items()}


def _fast_reports(groups, bound: int) -> dict[str, dict]:
    from .sweep import CHECKS, run_sweep

    res = run_sweep(bound)
    out = {}
    for g in groups:
        checked = failures = 0
        witnesses = []
        for name, prop in CHECKS:
            if prop != g:
                continue
            c, f = res.totals()[name]
            checked += c
            failures += f
            witnesses += [dict(w, check=name) for w in res.witnesses(name)]
        out[g] = {"checked": checked, "failures": failures, "witnesses": witnesses[:20]}
    return out


def _verify(args) -> tuple[str, int]:
    chosen = [flag for flag in VERIFY_GROUPS if getattr(args, flag)]
    if args.all or not chosen:
        groups = ALL_GROUPS
    else:
        groups = tuple(g for flag in chosen for g in VERIFY_GROUPS[flag])
    if args.norm_bound < 2:
        raise UsageError(f"--norm-bound {args.norm_bound}: must be at least 2")
    runner = _exact_reports if args.engine == "exact" else _fast_reports
    reports = runner(groups, args.norm_bound)
    ok = all(r["failures"] == 0 for r in reports.values())
    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps({"norm_bound": args.norm_bound, "engine": args.engine,
                           "passed": ok, "properties": reports}, indent=2) + "\n"
    elif fmt == "text":
        lines = []
        for g, r in reports.items():
            state = "PASS" if r["failures"] == 0 else "FAIL"
            lines.append(f"{state} {g}: {r['checked']} checks, {r['failures']} counterexamples")
            for w in r["witnesses"]:
                lines.append("    witness " + json.dumps(w, sort_keys=True))
        text = "\n".join(lines) + "\n"
    else:
        raise UsageError(f"verify: unsupported --format {fmt}")
    return text, EXIT_OK if ok else EXIT_VERIFY


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", default=argparse.SUPPRESS,
                        help="text, json, csv, markdown, dot or svg (depends on command)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output to this path")

    p = _Parser(prog="hurwitz-residues", parents=[common],
                description="Residue classes of prime Hurwitz integers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def with_modulus(sp):
        sp.add_argument("--alpha", help='modulus, e.g. "5/2+3/2i+3/2j+3/2k"')
        sp.add_argument("--alpha2", help='modulus in doubled coordinates, e.g. "5,3,3,3"')
        return sp

    with_modulus(sub.add_parser("residues", parents=[common], help="residue table"))
    with_modulus(sub.add_parser("energy", parents=[common], help="average energy"))

    t = sub.add_parser("table1", parents=[common], help="energies for primes N = 6k+1")
    t.add_argument("--max-norm", type=int, default=50)

    r = sub.add_parser("rate", parents=[common], help="code length and rate")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--k", type=int, default=1)

    g = with_modulus(sub.add_parser("graph", parents=[common], help="graph export"))
    g.add_argument("--rule", choices=["cycle", "unit", "complete"], default="cycle")
    g.add_argument("--layout", choices=["spring", "spiral"], default="spring")
    g.add_argument("--dims", type=int, choices=[2, 3], default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--turns", type=float, default=2.0)
    g.add_argument("--rest-length", type=float, default=1.0)
    g.add_argument("--repulsion", type=float, default=1.0)
    g.add_argument("--max-iters", type=int, default=20000)
    g.add_argument("--tol", type=float, default=1e-9)

    v = sub.add_parser("verify", parents=[common], help="exhaustive property checks")
    v.add_argument("--all", action="store_true", help="every property (default)")
    v.add_argument("--thm1", action="store_true", help="additive and multiplicative compatibility")
    v.add_argument("--thm2", action="store_true", help="tables are complete residue systems")
    v.add_argument("--prop7", action="store_true", help="mu(z) + mu(N - z) = 0")
    v.add_argument("--cor1", action="store_true", help="two-component primes use branch one only")
    v.add_argument("--norm-bound", type=int, default=200)
    v.add_argument("--engine", choices=["fast", "exact"], default="fast",
                   help="compiled sweep or pure rational arithmetic")
    return p


COMMANDS = {
    "residues": _residues,
    "energy": _energy,
    "table1": _table1,
    "rate": _rate,
    "graph": _graph,
    "verify": _verify,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        args.format = getattr(args, "format", None)
        out_path = getattr(args, "out", None)
        text, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"hurwitz-residues: error: {e}", file=stderr)
        return EXIT_USAGE
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
