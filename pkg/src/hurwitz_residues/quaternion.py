"""Exact arithmetic on Hurwitz integers and rational quaternions.

A Hurwitz integer is stored in doubled coordinates: the quaternion
``(d1 + d2 i + d3 j + d4 k) / 2`` with ``d1..d4`` plain Python integers that
all share one parity. All even means a Lipschitz point (integer components),
all odd means a half-integer point. Python integers are unbounded, so no
operation here can wrap around.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Union

__all__ = [
    "HurwitzInt",
    "RationalQuaternion",
    "ParityError",
    "add",
    "mul",
    "conj",
    "norm",
    "inverse",
    "is_hurwitz",
    "is_primitive",
    "is_prime",
    "is_prime_int",
    "find_primes_with_norm",
    "units",
    "parse_quaternion",
    "format_quaternion",
]

ClassFilter = Literal["integer", "half-integer", "both"]
Number = Union[int, Fraction]


class ParityError(ValueError):
    """Doubled coordinates do not share one parity, so the value is not in H."""


def _hamilton(a1, a2, a3, a4, b1, b2, b3, b4):
    return (
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )


@dataclass(frozen=True, slots=True)
class HurwitzInt:
    """Hurwitz integer ``(d1 + d2 i + d3 j + d4 k) / 2`` in doubled coordinates."""

    d1: int
    d2: int
    d3: int
    d4: int

    def __post_init__(self) -> None:
        for d in (self.d1, self.d2, self.d3, self.d4):
            if not isinstance(d, int) or isinstance(d, bool):
                raise TypeError(f"doubled coordinates must be int, got {d!r}")
        p = self.d1 & 1
        if (self.d2 & 1) != p or (self.d3 & 1) != p or (self.d4 & 1) != p:
            raise ParityError(
                f"doubled coordinates {self.doubled} mix parities; not a Hurwitz integer"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_ints(cls, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> "HurwitzInt":
        """Lipschitz point ``a + b i + c j + d k``."""
        return cls(2 * a, 2 * b, 2 * c, 2 * d)

    @classmethod
    def from_components(cls, *comps: Number) -> "HurwitzInt":
        if len(comps) != 4:
            raise ValueError("expected four components")
        doubled = []
        for c in comps:
            twice = Fraction(c) * 2
            if twice.denominator != 1:
                raise ParityError(f"component {c} is not an integer or half-integer")
            doubled.append(int(twice))
        return cls(*doubled)

    @classmethod
    def from_rational(cls, q: "RationalQuaternion") -> "HurwitzInt":
        return cls.from_components(*q.components)

    @classmethod
    def parse(cls, text: str) -> "HurwitzInt":
        return parse_quaternion(text)

    # -- views --------------------------------------------------------------

    @property
    def doubled(self) -> tuple[int, int, int, int]:
        return (self.d1, self.d2, self.d3, self.d4)

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(d, 2) for d in self.doubled)  # type: ignore[return-value]

    @property
    def is_lipschitz(self) -> bool:
        return self.d1 % 2 == 0

    @property
    def is_half_integer(self) -> bool:
        return self.d1 % 2 == 1

    def nonzero_count(self) -> int:
        return sum(1 for d in self.doubled if d)

    def is_zero(self) -> bool:
        return not any(self.doubled)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.components)

    def __str__(self) -> str:
        return format_quaternion(self)

    def __repr__(self) -> str:
        return f"HurwitzInt({format_quaternion(self)!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: object) -> "HurwitzInt":
        if isinstance(other, int) and not isinstance(other, bool):
            other = HurwitzInt.from_ints(other)
        if not isinstance(other, HurwitzInt):
            return NotImplemented
        return HurwitzInt(
            self.d1 + other.d1, self.d2 + other.d2, self.d3 + other.d3, self.d4 + other.d4
        )

    __radd__ = __add__

    def __neg__(self) -> "HurwitzInt":
        return HurwitzInt(-self.d1, -self.d2, -self.d3, -self.d4)

    def __sub__(self, other: object) -> "HurwitzInt":
        if isinstance(other, int) and not isinstance(other, bool):
            other = HurwitzInt.from_ints(other)
        if not isinstance(other, HurwitzInt):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "HurwitzInt":
        if isinstance(other, int) and not isinstance(other, bool):
            return HurwitzInt.from_ints(other) - self
        return NotImplemented

    def __mul__(self, other: object) -> "HurwitzInt":
        if isinstance(other, int) and not isinstance(other, bool):
            return HurwitzInt(self.d1 * other, self.d2 * other, self.d3 * other, self.d4 * other)
        if not isinstance(other, HurwitzInt):
            return NotImplemented
        # Product of doubled coordinates is the quadrupled product; halve exactly.
        quad = _hamilton(*self.doubled, *other.doubled)
        assert all(q % 2 == 0 for q in quad), "H is closed under multiplication"
        return HurwitzInt(*(q // 2 for q in quad))

    def __rmul__(self, other: object) -> "HurwitzInt":
        if isinstance(other, int) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def conj(self) -> "HurwitzInt":
        return HurwitzInt(self.d1, -self.d2, -self.d3, -self.d4)

    def norm(self) -> int:
        s = self.d1 * self.d1 + self.d2 * self.d2 + self.d3 * self.d3 + self.d4 * self.d4
        assert s % 4 == 0
        return s // 4

    def inverse(self) -> "RationalQuaternion":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero-norm quaternion has no inverse")
        c = self.conj()
        return RationalQuaternion(c.d1, c.d2, c.d3, c.d4, 2 * n)

    def to_rational(self) -> "RationalQuaternion":
        return RationalQuaternion(self.d1, self.d2, self.d3, self.d4, 2)


@dataclass(frozen=True, slots=True, init=False)
class RationalQuaternion:
    """Quaternion with rational components over one shared positive denominator.

    Always stored in lowest terms, so dataclass equality is value equality.
    """

    n1: int
    n2: int
    n3: int
    n4: int
    den: int

    def __init__(self, n1: int, n2: int, n3: int, n4: int, den: int = 1) -> None:
        if den == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        if den < 0:
            n1, n2, n3, n4, den = -n1, -n2, -n3, -n4, -den
        g = math.gcd(n1, n2, n3, n4, den)
        object.__setattr__(self, "n1", n1 // g)
        object.__setattr__(self, "n2", n2 // g)
        object.__setattr__(self, "n3", n3 // g)
        object.__setattr__(self, "n4", n4 // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def from_components(cls, *comps: Number) -> "RationalQuaternion":
        fr = [Fraction(c) for c in comps]
        den = math.lcm(*(f.denominator for f in fr))
        return cls(*(int(f * den) for f in fr), den)

    @classmethod
    def coerce(cls, value: object) -> "RationalQuaternion":
        if isinstance(value, RationalQuaternion):
            return value
        if isinstance(value, HurwitzInt):
            return value.to_rational()
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            f = Fraction(value)
            return cls(f.numerator, 0, 0, 0, f.denominator)
        raise TypeError(f"cannot interpret {value!r} as a quaternion")

    @property
    def numerators(self) -> tuple[int, int, int, int]:
        return (self.n1, self.n2, self.n3, self.n4)

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(n, self.den) for n in self.numerators)  # type: ignore[return-value]

    def __add__(self, other: object) -> "RationalQuaternion":
        try:
            o = RationalQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        den = self.den * o.den
        return RationalQuaternion(
            *(a * o.den + b * self.den for a, b in zip(self.numerators, o.numerators)), den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalQuaternion":
        return RationalQuaternion(-self.n1, -self.n2, -self.n3, -self.n4, self.den)

    def __sub__(self, other: object) -> "RationalQuaternion":
        try:
            o = RationalQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RationalQuaternion":
        return RationalQuaternion.coerce(other) - self

    def __mul__(self, other: object) -> "RationalQuaternion":
        try:
            o = RationalQuaternion.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalQuaternion(*_hamilton(*self.numerators, *o.numerators), self.den * o.den)

    def __rmul__(self, other: object) -> "RationalQuaternion":
        return RationalQuaternion.coerce(other) * self

    def __truediv__(self, scalar: object) -> "RationalQuaternion":
        if isinstance(scalar, bool) or not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        f = Fraction(scalar)
        if f == 0:
            raise ZeroDivisionError("division by zero")
        return RationalQuaternion(
            *(n * f.denominator for n in self.numerators), self.den * f.numerator
        )

    def conj(self) -> "RationalQuaternion":
        return RationalQuaternion(self.n1, -self.n2, -self.n3, -self.n4, self.den)

    def norm(self) -> Fraction:
        return Fraction(sum(n * n for n in self.numerators), self.den * self.den)

    def is_hurwitz(self) -> bool:
        if self.den == 1:
            return True
        # lowest terms with den 2 means at least one odd numerator; all must be odd
        return self.den == 2 and all(n % 2 for n in self.numerators)

    def to_hurwitz(self) -> HurwitzInt:
        if not self.is_hurwitz():
            raise ParityError(f"{format_quaternion(self)} is not a Hurwitz integer")
        k = 2 // self.den
        return HurwitzInt(*(n * k for n in self.numerators))

    def __str__(self) -> str:
        return format_quaternion(self)


# -- functional surface ------------------------------------------------------


def add(a: HurwitzInt, b: HurwitzInt) -> HurwitzInt:
    return a + b


def mul(a: HurwitzInt, b: HurwitzInt) -> HurwitzInt:
    return a * b


def conj(a: HurwitzInt) -> HurwitzInt:
    return a.conj()


def norm(a: HurwitzInt) -> int:
    return a.norm()


def inverse(a: HurwitzInt) -> RationalQuaternion:
    return a.inverse()


def is_hurwitz(q: object) -> bool:
    """True when ``q`` (any quaternion-like value) lies in H."""
    if isinstance(q, HurwitzInt):
        return True
    return RationalQuaternion.coerce(q).is_hurwitz()


def is_primitive(a: HurwitzInt) -> bool:
    """gcd of the components (integer points) or of ``2*beta + 1`` (half points) is one.

    Both cases reduce to gcd of the doubled coordinates being 1; for integer
    points the doubled gcd is even, hence never 1, so the integer case divides
    out the factor 2 first.
    """
    g = math.gcd(*a.doubled)
    if a.is_lipschitz:
        return g == 2
    return g == 1


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_int(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24, which covers 64 bits."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(a: HurwitzInt) -> bool:
    """A Hurwitz integer is prime when its norm is a rational prime."""
    return is_prime_int(a.norm())


def find_primes_with_norm(p: int, class_filter: ClassFilter = "both") -> list[HurwitzInt]:
    """All Hurwitz integers of norm ``p`` in the requested parity class.

    Searches the doubled box ``|d_i| <= 2*ceil(sqrt(p))`` and returns the hits
    in lexicographic order of doubled coordinates.
    """
    if not is_prime_int(p):
        raise ValueError(f"{p} is not prime")
    if class_filter not in ("integer", "half-integer", "both"):
        raise ValueError(f"unknown class filter {class_filter!r}")
    bound = 2 * math.isqrt(p - 1) + 2  # 2*ceil(sqrt(p)) for non-squares
    target = 4 * p
    out = []
    rng = range(-bound, bound + 1)
    for d1 in rng:
        r1 = target - d1 * d1
        if r1 < 0:
            continue
        for d2 in rng:
            r2 = r1 - d2 * d2
            if r2 < 0:
                continue
            for d3 in rng:
                r3 = r2 - d3 * d3
                if r3 < 0:
                    continue
                d4 = math.isqrt(r3)
                if d4 * d4 != r3 or d4 > bound:
                    continue
                for cand in sorted({-d4, d4}):
                    parity = {d1 & 1, d2 & 1, d3 & 1, cand & 1}
                    if len(parity) != 1:
                        continue
                    odd = d1 & 1
                    if class_filter == "integer" and odd:
                        continue
                    if class_filter == "half-integer" and not odd:
                        continue
                    out.append(HurwitzInt(d1, d2, d3, cand))
    out.sort(key=lambda h: h.doubled)
    return out


def units() -> frozenset[HurwitzInt]:
    """The 24 units of H: +-1, +-i, +-j, +-k and the 16 points (+-1 +-i +-j +-k)/2."""
    out = set()
    for axis in range(4):
        for s in (2, -2):
            d = [0, 0, 0, 0]
            d[axis] = s
            out.add(HurwitzInt(*d))
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                for s4 in (1, -1):
                    out.add(HurwitzInt(s1, s2, s3, s4))
    return frozenset(out)


# -- text form -----------------------------------------------------------------

_TERM = re.compile(r"([+-])?(\d+(?:/\d+)?)?([ijk])?")


def _fmt_coeff(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def format_quaternion(q: object) -> str:
    """Canonical ``a+bi+cj+dk`` text; halves are written ``p/2``, zeros omitted."""
    if isinstance(q, (HurwitzInt, RationalQuaternion)):
        comps = q.components
    else:
        comps = tuple(Fraction(c) for c in q)  # type: ignore[union-attr]
    parts: list[str] = []
    for c, unit in zip(comps, ("", "i", "j", "k")):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = unit if (unit and mag == 1) else _fmt_coeff(mag) + unit
        parts.append(sign + body)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


def parse_quaternion(text: str) -> HurwitzInt:
    """Parse the canonical text form into a Hurwitz integer.

    Whitespace may appear between terms and around signs, not inside numbers.
    """
    if re.search(r"[\d/]\s+[\d/]", text):
        raise ValueError(f"whitespace inside a number in {text!r}")
    src = "".join(text.split())
    if not src:
        raise ValueError("empty quaternion text")
    comps = [Fraction(0)] * 4
    seen: set[int] = set()
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse quaternion {text!r} at offset {pos}")
        if pos > 0 and m.group(1) is None:
            raise ValueError(f"missing sign between terms in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        idx = "ijk".index(m.group(3)) + 1 if m.group(3) else 0
        if idx in seen:
            raise ValueError(f"component repeated in {text!r}")
        seen.add(idx)
        comps[idx] = sign * coeff
        pos = m.end()
    return HurwitzInt.from_components(*comps)
