"""Two-branch modulo function onto residue classes of a prime Hurwitz integer.

For a prime Hurwitz integer ``alpha`` with norm ``n`` and an integer ``z``:

    mu1(z) = z - alpha * round_int(conj(alpha) * z / n)
    mu2(z) = z - alpha * round_half(conj(alpha) * z / n)

and ``mu(z)`` picks ``mu1`` when its norm is strictly smaller, or when the
norms tie and ``z`` is even; otherwise ``mu2``.

Congruence is taken modulo the ideal ``alpha * H``: ``q1 = q2 (mod alpha)``
iff ``q1 - q2 = alpha * lam`` for a Hurwitz ``lam``. This is the side the
construction itself lands on, since each branch subtracts ``alpha`` times a
Hurwitz integer.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .quaternion import HurwitzInt, RationalQuaternion, is_prime_int, parse_quaternion
from .rounding import RoundingMode, round_div_doubled

__all__ = [
    "ConstructionError",
    "PrimeModulus",
    "ResidueEntry",
    "ResidueTable",
    "VerificationReport",
    "mu1",
    "mu2",
    "mu",
    "residue_table",
    "left_congruent",
    "right_congruent",
    "class_key",
    "verify_homomorphism",
    "verify_bijection",
    "verify_symmetry",
    "verify_anchors",
    "verify_two_component_collapse",
    "two_component_primes",
]

Branch = Literal[1, 2]
MAX_WITNESSES = 20


class ConstructionError(ArithmeticError):
    """A residue table violated bijectivity or the congruence z = mu(z)."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True, slots=True)
class PrimeModulus:
    alpha: HurwitzInt
    n: int = field(init=False)

    def __post_init__(self) -> None:
        n = self.alpha.norm()
        if not is_prime_int(n):
            raise ValueError(f"{self.alpha} has norm {n}, which is not prime")
        object.__setattr__(self, "n", n)

    @classmethod
    def parse(cls, text: str) -> "PrimeModulus":
        return cls(parse_quaternion(text))

    def __str__(self) -> str:
        return str(self.alpha)


@dataclass(frozen=True, slots=True)
class ResidueEntry:
    z: int
    branch: Branch
    residue: HurwitzInt
    norms: tuple[int, int]
    mu1: HurwitzInt
    mu2: HurwitzInt


@dataclass(frozen=True)
class ResidueTable:
    modulus: PrimeModulus
    entries: tuple[ResidueEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, z: int) -> ResidueEntry:
        return self.entries[z]

    @property
    def residues(self) -> list[HurwitzInt]:
        return [e.residue for e in self.entries]

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.modulus.alpha),
            "norm": self.modulus.n,
            "entries": [
                {
                    "z": e.z,
                    "branch": e.branch,
                    "residue": str(e.residue),
                    "norm1": e.norms[0],
                    "norm2": e.norms[1],
                    "mu1": str(e.mu1),
                    "mu2": str(e.mu2),
                }
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ResidueTable":
        modulus = PrimeModulus(parse_quaternion(data["alpha"]))
        if data["norm"] != modulus.n:
            raise ValueError(f"norm field {data['norm']} disagrees with alpha {modulus}")
        entries = tuple(
            ResidueEntry(
                z=int(e["z"]),
                branch=int(e["branch"]),  # type: ignore[arg-type]
                residue=parse_quaternion(e["residue"]),
                norms=(int(e["norm1"]), int(e["norm2"])),
                mu1=parse_quaternion(e["mu1"]),
                mu2=parse_quaternion(e["mu2"]),
            )
            for e in data["entries"]
        )
        return cls(modulus, entries)

    @classmethod
    def from_json(cls, text: str) -> "ResidueTable":
        return cls.from_dict(json.loads(text))

    CSV_FIELDS = ("alpha", "norm", "z", "branch", "residue", "norm1", "norm2", "mu1", "mu2")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        for row in self.to_dict()["entries"]:
            w.writerow(
                [str(self.modulus.alpha), self.modulus.n]
                + [row[k] for k in self.CSV_FIELDS[2:]]
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ResidueTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("CSV holds no entries")
        alphas = {r["alpha"] for r in rows}
        if len(alphas) != 1:
            raise ValueError(f"CSV mixes moduli: {sorted(alphas)}")
        return cls.from_dict(
            {"alpha": rows[0]["alpha"], "norm": int(rows[0]["norm"]), "entries": rows}
        )


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of an exhaustive check. Counterexamples are data, never raised."""

    name: str
    passed: bool
    checked: int
    failures: int
    counterexamples: tuple[dict, ...] = ()
    details: dict = field(default_factory=dict)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return f"{state} {self.name}: {self.checked} checks, {self.failures} counterexamples"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "counterexamples": list(self.counterexamples),
            "details": self.details,
        }


class _Collector:
    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failures = 0
        self.witnesses: list[dict] = []

    def check(self, ok: bool, **witness) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({k: _plain(v) for k, v in witness.items()})

    def report(self, **details) -> VerificationReport:
        return VerificationReport(
            self.name,
            self.failures == 0,
            self.checked,
            self.failures,
            tuple(self.witnesses),
            details,
        )


def _plain(v):
    if isinstance(v, (HurwitzInt, RationalQuaternion, PrimeModulus)):
        return str(v)
    return v


# -- the two branches ----------------------------------------------------------


def _branch(m: PrimeModulus, z: int, mode: RoundingMode) -> HurwitzInt:
    den = 2 * m.n
    c = m.alpha.conj().doubled
    # conj(alpha) * z / n, componentwise: (c_i / 2) * z / n = c_i * z / (2n)
    rounded = HurwitzInt(*(round_div_doubled(ci * z, den, mode) for ci in c))
    return HurwitzInt.from_ints(z) - m.alpha * rounded


def mu1(m: PrimeModulus, z: int) -> HurwitzInt:
    return _branch(m, z, RoundingMode.NearestInteger)


def mu2(m: PrimeModulus, z: int) -> HurwitzInt:
    return _branch(m, z, RoundingMode.NearestHalfInteger)


def choose_branch(z: int, norm1: int, norm2: int) -> Branch:
    if norm1 < norm2:
        return 1
    if norm1 == norm2 and z % 2 == 0:
        return 1
    return 2


def mu(m: PrimeModulus, z: int) -> ResidueEntry:
    r1, r2 = mu1(m, z), mu2(m, z)
    n1, n2 = r1.norm(), r2.norm()
    b = choose_branch(z, n1, n2)
    return ResidueEntry(z, b, r1 if b == 1 else r2, (n1, n2), r1, r2)


# -- congruence ------------------------------------------------------------------


def left_congruent(q1: HurwitzInt, q2: HurwitzInt, m: PrimeModulus) -> bool:
    """``q1 - q2 = alpha * lam`` for some Hurwitz ``lam``, i.e. ``alpha^-1 (q1 - q2)`` in H."""
    diff = RationalQuaternion.coerce(q1) - RationalQuaternion.coerce(q2)
    return (m.alpha.inverse() * diff).is_hurwitz()


def right_congruent(q1: HurwitzInt, q2: HurwitzInt, m: PrimeModulus) -> bool:
    """``q1 - q2 = lam * alpha`` for some Hurwitz ``lam``."""
    diff = RationalQuaternion.coerce(q1) - RationalQuaternion.coerce(q2)
    return (diff * m.alpha.inverse()).is_hurwitz()


def omega_coords(q: HurwitzInt) -> tuple[int, int, int, int]:
    """Coordinates in the Z-basis (1+i+j+k)/2, i, j, k of H."""
    e1, e2, e3, e4 = q.doubled
    return (e1, (e2 - e1) // 2, (e3 - e1) // 2, (e4 - e1) // 2)


def class_key(q: HurwitzInt, m: PrimeModulus) -> tuple[int, int, int, int]:
    """Canonical label of the class of ``q`` modulo ``alpha * H``.

    ``q1 - q2 = alpha*lam`` iff ``conj(alpha)(q1 - q2)`` lies in ``n*H``, so the
    basis coordinates of ``conj(alpha) * q`` reduced mod ``n`` identify the class.
    """
    return tuple(c % m.n for c in omega_coords(m.alpha.conj() * q))  # type: ignore[return-value]


# -- tables ----------------------------------------------------------------------


def residue_table(m: PrimeModulus) -> ResidueTable:
    """Apply ``mu`` to ``z = 0 .. n-1`` and check the result is a residue system."""
    entries = tuple(mu(m, z) for z in range(m.n))
    seen: dict[tuple, int] = {}
    for e in entries:
        key = class_key(e.residue, m)
        if key != class_key(HurwitzInt.from_ints(e.z), m):
            raise ConstructionError(
                f"construction violated bijectivity: mu({e.z}) = {e.residue} "
                f"is not congruent to {e.z} modulo {m}",
                (e.z, e.z),
            )
        if key in seen:
            other = seen[key]
            raise ConstructionError(
                f"construction violated bijectivity: mu({other}) and mu({e.z}) "
                f"are congruent modulo {m}",
                (other, e.z),
            )
        seen[key] = e.z
    return ResidueTable(m, entries)


def branch_table(m: PrimeModulus, branch: Branch) -> list[HurwitzInt]:
    f = mu1 if branch == 1 else mu2
    return [f(m, z) for z in range(m.n)]


# -- verification oracles ----------------------------------------------------------


def verify_homomorphism(m: PrimeModulus, table: ResidueTable | None = None) -> VerificationReport:
    """Exhaustive additive and multiplicative compatibility over all pairs."""
    t = table if table is not None else ResidueTable(m, tuple(mu(m, z) for z in range(m.n)))
    res = t.residues
    n = m.n
    add = _Collector("homomorphism-add")
    mult = _Collector("homomorphism-mul")
    for z1 in range(n):
        for z2 in range(n):
            s = res[z1] + res[z2]
            add.check(left_congruent(res[(z1 + z2) % n], s, m), z1=z1, z2=z2, alpha=m)
            p = res[z1] * res[z2]
            mult.check(left_congruent(res[(z1 * z2) % n], p, m), z1=z1, z2=z2, alpha=m)
    out = _Collector("homomorphism")
    out.checked = add.checked + mult.checked
    out.failures = add.failures + mult.failures
    out.witnesses = (
        [dict(w, op="add") for w in add.witnesses] + [dict(w, op="mul") for w in mult.witnesses]
    )[:MAX_WITNESSES]
    return out.report(alpha=str(m.alpha), pairs=n * n, add_failures=add.failures,
                      mul_failures=mult.failures)


def verify_bijection(m: PrimeModulus, table: ResidueTable | None = None) -> VerificationReport:
    """Residues pairwise distinct and pairwise non-congruent; ``mu(z) = z (mod alpha)``."""
    t = table if table is not None else ResidueTable(m, tuple(mu(m, z) for z in range(m.n)))
    res = t.residues
    col = _Collector("bijection")
    for z, r in enumerate(res):
        col.check(left_congruent(r, HurwitzInt.from_ints(z), m), kind="not-congruent-to-z",
                  z=z, residue=r)
    for a in range(len(res)):
        for b in range(a + 1, len(res)):
            col.check(res[a] != res[b], kind="equal-residues", z1=a, z2=b)
            col.check(not left_congruent(res[a], res[b], m), kind="congruent-residues",
                      z1=a, z2=b)
    distinct = len(set(res))
    return col.report(alpha=str(m.alpha), distinct=distinct, size=len(res))


def verify_symmetry(m: PrimeModulus, table: ResidueTable | None = None) -> VerificationReport:
    """``mu(z) + mu(n - z) = 0 (mod alpha)`` for ``z = 1 .. n-1``."""
    t = table if table is not None else ResidueTable(m, tuple(mu(m, z) for z in range(m.n)))
    res = t.residues
    zero = HurwitzInt(0, 0, 0, 0)
    col = _Collector("symmetry")
    for z in range(1, m.n):
        col.check(left_congruent(res[z] + res[m.n - z], zero, m), z=z)
    return col.report(alpha=str(m.alpha))


def verify_anchors(m: PrimeModulus) -> VerificationReport:
    """Anchors at ``z = 0`` and ``z = n``.

    * ``mu1(0) = 0``;
    * ``mu2(0) = 0 (mod alpha)`` and ``N(mu2(0)) = N(alpha)``;
    * at ``z = n`` the branch matching alpha's parity class is exactly 0 and
      the other branch is congruent to 0.
    """
    zero = HurwitzInt(0, 0, 0, 0)
    col = _Collector("anchors")
    a0, b0 = mu1(m, 0), mu2(m, 0)
    col.check(a0 == zero, kind="mu1(0) != 0", value=a0)
    col.check(left_congruent(b0, zero, m), kind="mu2(0) not congruent to 0", value=b0)
    col.check(b0.norm() == m.n, kind="N(mu2(0)) != N(alpha)", value=b0)
    aN, bN = mu1(m, m.n), mu2(m, m.n)
    exact, other = (aN, bN) if m.alpha.is_lipschitz else (bN, aN)
    col.check(exact == zero, kind="matching branch at z=N not 0", value=exact)
    col.check(left_congruent(other, zero, m), kind="other branch at z=N not congruent to 0",
              value=other)
    return col.report(alpha=str(m.alpha), mu2_at_0=str(b0), mu1_at_n=str(aN), mu2_at_n=str(bN))


def two_component_primes(norm_bound: int) -> list[HurwitzInt]:
    """Prime Hurwitz integers with exactly two nonzero (integer) components."""
    out = set()
    r = math.isqrt(norm_bound)
    for x in range(1, r + 1):
        for y in range(1, r + 1):
            p = x * x + y * y
            if p > norm_bound or not is_prime_int(p):
                continue
            for i in range(4):
                for j in range(4):
                    if i == j:
                        continue
                    for sx in (1, -1):
                        for sy in (1, -1):
                            d = [0, 0, 0, 0]
                            d[i], d[j] = 2 * sx * x, 2 * sy * y
                            out.add(HurwitzInt(*d))
    return sorted(out, key=lambda h: (h.norm(), h.doubled))


def verify_two_component_collapse(norm_bound: int,
                                  moduli: Iterable[HurwitzInt] | None = None) -> VerificationReport:
    """For two-component primes the min-rule table equals the mu1-only table."""
    if norm_bound < 2:
        raise ValueError("norm_bound must be at least 2")
    col = _Collector("two-component-collapse")
    count = 0
    for alpha in moduli if moduli is not None else two_component_primes(norm_bound):
        m = PrimeModulus(alpha)
        count += 1
        for z in range(m.n):
            e = mu(m, z)
            col.check(e.residue == e.mu1, alpha=m, z=z, mu=e.residue, mu1=e.mu1,
                      norms=list(e.norms))
    return col.report(moduli=count, norm_bound=norm_bound)


def entries_from_sequence(m: PrimeModulus, residues: Sequence[HurwitzInt]) -> ResidueTable:
    """Wrap an explicit residue list (for feeding altered tables to the oracles)."""
    return ResidueTable(
        m,
        tuple(
            ResidueEntry(z, 1, r, (r.norm(), r.norm()), r, r) for z, r in enumerate(residues)
        ),
    )
