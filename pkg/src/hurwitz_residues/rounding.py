"""Nearest-integer and nearest-half-integer rounding with a sign-dependent tie rule.

Ties are broken toward +inf when the value being rounded is zero or negative
and toward -inf when it is positive, so ``-1/2 -> 0``, ``3/2 -> 1``,
``0 -> 1/2`` (half grid), ``1 -> 1/2`` and ``-1 -> -1/2``. Quaternions are
rounded one component at a time.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

from .quaternion import HurwitzInt, RationalQuaternion

__all__ = [
    "RoundingMode",
    "round_scalar",
    "round_quaternion",
    "round_div_doubled",
]


class RoundingMode(enum.Enum):
    NearestInteger = "nearest-integer"
    NearestHalfInteger = "nearest-half-integer"


def _round_int(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0) under the tie rule."""
    if num <= 0:
        # floor(x + 1/2): ties go up
        return (2 * num + den) // (2 * den)
    # ceil(x - 1/2): ties go down
    return -((den - 2 * num) // (2 * den))


def round_div_doubled(num: int, den: int, mode: RoundingMode) -> int:
    """Round ``num/den`` and return twice the result (always an integer).

    This is the integer kernel used by the modulo functions, which work in
    doubled coordinates.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    if mode is RoundingMode.NearestInteger:
        return 2 * _round_int(num, den)
    # Nearest point of Z + 1/2 to x is 1/2 + nearest integer to (x - 1/2);
    # the tie rule still looks at the sign of x itself.
    shifted = 2 * num - den  # (x - 1/2) * 2*den
    if num <= 0:
        r = (2 * shifted + 2 * den) // (4 * den)
    else:
        r = -((2 * den - 2 * shifted) // (4 * den))
    return 2 * r + 1


def round_scalar(x: Union[int, Fraction], mode: RoundingMode) -> Fraction:
    f = Fraction(x)
    return Fraction(round_div_doubled(f.numerator, f.denominator, mode), 2)


def round_quaternion(
    q: Union[RationalQuaternion, HurwitzInt, int, Fraction], mode: RoundingMode
) -> HurwitzInt:
    """Round every component; the result is always a Hurwitz integer.

    NearestInteger yields all-even doubled coordinates, NearestHalfInteger
    all-odd ones.
    """
    rq = RationalQuaternion.coerce(q)
    return HurwitzInt(*(round_div_doubled(n, rq.den, mode) for n in rq.numerators))
