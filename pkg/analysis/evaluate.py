"""Arbitrary-precision evaluation of term sums on the domain x, y >= 1."""

import math
from fractions import Fraction

import mpmath

from analysis.errors import DomainError
from analysis.rationals import to_rational
from models.terms import TermSum

DEFAULT_PRECISION = 113
MIN_PRECISION = 53
GUARD_BITS = 10


def to_mpf(q: Fraction) -> mpmath.mpf:
    """Exact rational to mpf at the current working precision."""
    return mpmath.mpf(q.numerator) / q.denominator


def _log_magnitude(q: Fraction) -> float:
    """ln q for q >= 1, without converting q to a float."""
    return math.log(q.numerator) - math.log(q.denominator)


def guard_bits(s: TermSum, x: Fraction, y: Fraction) -> int:
    """Extra working bits so that rounding x, y and the exponents does not show in the result.

    An input error of relative size u in x becomes a * ln(x) * u in x^a, so
    the working precision is raised by log2 of the largest exponent-log
    product plus a fixed margin.
    """
    lx, ly = _log_magnitude(x), _log_magnitude(y)
    scale = max(
        [1.0]
        + [float(t.exp_a) * lx for t in s.terms]
        + [float(t.exp_b) * ly for t in s.terms]
        + [float(t.exp_a) for t in s.terms]
        + [float(t.exp_b) for t in s.terms]
    )
    return math.ceil(math.log2(scale)) + GUARD_BITS


def eval_sum(s: TermSum, x, y, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Evaluate ``s`` at ``(x, y)``, correct to ``precision`` bits.

    ``x`` and ``y`` are coerced to exact rationals first. The powers are
    computed with guard bits and the sum is rounded once to ``precision``,
    so the relative error of each power and of the (positive) total stays
    within 2^(1 - precision).
    """
    if precision < MIN_PRECISION:
        raise DomainError(f"precision must be at least {MIN_PRECISION} bits, got {precision}")
    xq, yq = to_rational(x), to_rational(y)
    if xq < 1 or yq < 1:
        raise DomainError(f"evaluation requires x >= 1 and y >= 1, got x={xq}, y={yq}")

    with mpmath.workprec(precision + guard_bits(s, xq, yq)):
        mx, my = to_mpf(xq), to_mpf(yq)
        total = mpmath.mpf(0)
        for term in s.terms:
            total += to_mpf(term.coeff) * mx ** to_mpf(term.exp_a) * my ** to_mpf(term.exp_b)
    with mpmath.workprec(precision):
        return +total
