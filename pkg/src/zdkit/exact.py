"""Exact integer and rational helpers.

Every bound in this package reduces to integer or rational comparisons;
nothing here ever touches floating point. Square-root bounds are handled
by comparing squares, ceilings by exact division.
"""

from __future__ import annotations

import math
from fractions import Fraction


def ceil_div(a: int, b: int) -> int:
    """Ceiling of a/b for integers, b > 0."""
    if b <= 0:
        raise ValueError("ceil_div requires a positive divisor")
    return -(-a // b)


def ceil_fraction(x: Fraction | int) -> int:
    """Smallest integer >= x."""
    if isinstance(x, int):
        return x
    return ceil_div(x.numerator, x.denominator)


def isqrt_ceil(x: int) -> int:
    """Smallest integer s with s*s >= x (x >= 0).

    Equivalently the square root of the smallest perfect square >= x.
    """
    if x < 0:
        raise ValueError("isqrt_ceil requires a nonnegative argument")
    s = math.isqrt(x)
    return s if s * s == x else s + 1


def smallest_square_at_least(x: int) -> int:
    """The smallest perfect square >= x."""
    s = isqrt_ceil(x)
    return s * s
