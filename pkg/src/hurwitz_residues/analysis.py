"""Average energy of residue tables, the N = 6k+1 energy table, and code rates."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from .modulo import ConstructionError, PrimeModulus, ResidueTable, residue_table
from .quaternion import HurwitzInt, find_primes_with_norm, is_prime_int

__all__ = [
    "EnergyReport",
    "RateReport",
    "Table1Row",
    "average_energy",
    "render_decimal",
    "balanced_representatives",
    "table1",
    "table1_markdown",
    "table1_csv",
    "code_rate",
]


def render_decimal(x: Fraction, places: int = 4) -> str:
    """Fixed-point rendering of an exact rational, rounded half-up in two steps.

    The value is first rounded half-up to ``places + 1`` digits and then to
    ``places``. For 28/13 = 2.153846... this gives 2.15385 -> 2.1539, the
    figure quoted alongside the exact value; single-step half-up would give
    2.1538. Every other published energy is unaffected by the extra step.
    """
    q = Decimal(x.numerator) / Decimal(x.denominator)
    fine = q.quantize(Decimal(1).scaleb(-(places + 1)), rounding=ROUND_HALF_UP)
    return str(fine.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class EnergyReport:
    modulus: PrimeModulus
    total_norm: int
    average_energy: Fraction

    @property
    def decimal(self) -> str:
        return render_decimal(self.average_energy)

    def text(self) -> str:
        e = self.average_energy
        return f"{e.numerator}/{e.denominator} ≈ {self.decimal}"

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.modulus.alpha),
            "norm": self.modulus.n,
            "total_norm": self.total_norm,
            "average_energy": str(self.average_energy),
            "decimal": self.decimal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def average_energy(m: PrimeModulus | HurwitzInt, table: ResidueTable | None = None) -> EnergyReport:
    """Mean norm over the residue table, as an exact rational."""
    if isinstance(m, HurwitzInt):
        m = PrimeModulus(m)
    t = table if table is not None else residue_table(m)
    total = sum(r.norm() for r in t.residues)
    return EnergyReport(m, total, Fraction(total, m.n))


def balanced_representatives(n: int, class_filter: str) -> list[HurwitzInt]:
    """Primes of norm ``n`` with non-negative, non-increasing components, three of them equal."""
    out = []
    for h in find_primes_with_norm(n, class_filter):
        d = h.doubled
        if min(d) >= 0 and list(d) == sorted(d, reverse=True) and max(map(d.count, d)) >= 3:
            out.append(h)
    return out


@dataclass(frozen=True)
class Table1Row:
    n: int
    integer_reps: tuple[HurwitzInt, ...]
    half_reps: tuple[HurwitzInt, ...]
    half_energies: tuple[Fraction, ...]
    integer_energies: tuple[Fraction, ...]

    @property
    def energy(self) -> Fraction:
        return self.half_energies[0]

    @property
    def decimal(self) -> str:
        return render_decimal(self.energy)

    @property
    def integer_class_agrees(self) -> bool:
        return all(e == self.energy for e in self.integer_energies)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "integer_reps": [str(h) for h in self.integer_reps],
            "half_reps": [str(h) for h in self.half_reps],
            "energy": str(self.energy),
            "decimal": self.decimal,
            "integer_energies": [str(e) for e in self.integer_energies],
        }


def table1(norm_bound: int) -> list[Table1Row]:
    """Energies for every prime ``N = 6k+1 <= norm_bound``.

    Listed half-integer representatives must share one energy (a
    ConstructionError otherwise); integer-class energies ride along unasserted.
    """
    if norm_bound < 7:
        raise ValueError("norm_bound must be at least 7")
    rows = []
    for n in range(7, norm_bound + 1, 6):
        if not is_prime_int(n):
            continue
        ints = balanced_representatives(n, "integer")
        halves = balanced_representatives(n, "half-integer")
        if not halves or not ints:
            raise ConstructionError(f"no representative of norm {n} found in the search box")
        he = tuple(average_energy(h).average_energy for h in halves)
        if len(set(he)) != 1:
            raise ConstructionError(
                f"half-integer representatives of norm {n} disagree: "
                + ", ".join(f"{h}: {e}" for h, e in zip(halves, he))
            )
        ie = tuple(average_energy(h).average_energy for h in ints)
        rows.append(Table1Row(n, tuple(ints), tuple(halves), he, ie))
    return rows


def table1_markdown(rows: list[Table1Row]) -> str:
    lines = [
        "| N | integer class | half-integer class | average energy | integer-class energy |",
        "|---|---|---|---|---|",
    ]
    for r in rows:
        lines.append(
            f"| {r.n} | {', '.join(map(str, r.integer_reps))} | "
            f"{', '.join(map(str, r.half_reps))} | {r.decimal} | "
            f"{', '.join(render_decimal(e) for e in r.integer_energies)} |"
        )
    return "\n".join(lines) + "\n"


def table1_csv(rows: list[Table1Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "integer_reps", "half_reps", "energy", "decimal", "integer_energies"])
    for r in rows:
        w.writerow([
            r.n,
            ";".join(map(str, r.integer_reps)),
            ";".join(map(str, r.half_reps)),
            str(r.energy),
            r.decimal,
            ";".join(str(e) for e in r.integer_energies),
        ])
    return buf.getvalue()


@dataclass(frozen=True)
class RateReport:
    p: int
    k: int
    n: int
    rate: Fraction

    def text(self) -> str:
        return f"({self.n},{self.k})-code, R = {self.rate.numerator}/{self.rate.denominator}"

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "n": self.n, "rate": str(self.rate)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def code_rate(p: int, k: int = 1) -> RateReport:
    """Length ``n = (p^k - 1)/24`` and rate ``k/n`` of a code whose alphabet has ``p`` symbols."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not is_prime_int(p):
        raise ValueError(f"p = {p} is not prime")
    if p % 24 != 1:
        raise ValueError(f"p = {p} is not 1 mod 24 ({p} mod 24 = {p % 24})")
    n, rem = divmod(p**k - 1, 24)
    assert rem == 0
    return RateReport(p, k, n, Fraction(k, n))
