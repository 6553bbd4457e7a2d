"""Exact dyadic arithmetic helpers.

Acceptance tests and degree thresholds in the regularization machinery are
stated as powers of two with integer exponents that may be negative.
Carrying them as ``Fraction`` values keeps every comparison exact; the
floor/ceil base-two logarithms below run on integers only.
"""

from __future__ import annotations

from fractions import Fraction


def pow2(exp: int) -> Fraction:
    """Exact 2**exp for any integer exponent."""
    if exp >= 0:
        return Fraction(1 << exp)
    return Fraction(1, 1 << (-exp))


def floor_log2(x: Fraction) -> int:
    """Largest k with 2**k <= x, for x > 0."""
    if x <= 0:
        raise ValueError("floor_log2 requires a positive value")
    p, q = x.numerator, x.denominator
    k = p.bit_length() - q.bit_length()
    # p.bit_length()-q.bit_length() is within one of the answer; fix up.
    while _le_pow2(k + 1, p, q):
        k += 1
    while not _le_pow2(k, p, q):
        k -= 1
    return k


def ceil_log2(x: Fraction) -> int:
    """Smallest k with x <= 2**k, for x > 0."""
    k = floor_log2(x)
    return k if x == pow2(k) else k + 1


def _le_pow2(k: int, p: int, q: int) -> bool:
    """2**k <= p/q using shifts only."""
    if k >= 0:
        return (q << k) <= p
    return q <= (p << (-k))
