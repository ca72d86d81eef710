"""Exact rational helpers: coercion, compact formatting and decimal rendering.

Everything numeric that feeds a decision is a ``fractions.Fraction``. The
decimal renderings here are for presentation only and are computed exactly
from the rational value, never through a float.
"""

import decimal
import math
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema

from analysis.errors import TermValueError

TABLE_DECIMALS = 2
SIGNIFICANT_DIGITS = 6


def to_rational(value: Any) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts Fraction, int and strings such as ``"3/2"``, ``"0.05"`` or ``"7"``.
    Floats and bools are refused: a float has already lost the exact value.
    """
    if isinstance(value, bool):
        raise TermValueError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise TermValueError(f"not a rational number: {value!r}") from e
    raise TermValueError(f"not a rational number: {value!r} ({type(value).__name__})")


def format_rational(q: Fraction) -> str:
    """Compact exact form: ``"p"`` for integers, ``"p/q"`` otherwise."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    """Parse a comma-separated list such as ``"0.05,0.14,7/10"``."""
    items = [part for part in (p.strip() for p in text.split(",")) if part]
    if not items:
        raise TermValueError("empty list")
    return [to_rational(item) for item in items]


def round_half_up(q: Fraction, places: int = TABLE_DECIMALS) -> str:
    """Render ``q`` with exactly ``places`` decimals, ties rounded away from zero."""
    scale = 10**places
    scaled = abs(q) * scale
    units = math.floor(scaled + Fraction(1, 2))
    sign = "-" if q < 0 and units != 0 else ""
    whole, frac = divmod(units, scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def significant(q: Fraction, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Render ``q`` to ``digits`` significant digits (round half up), no exponent."""
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_UP)
    value = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return format(value, "f")


Rational = Annotated[
    Fraction,
    BeforeValidator(to_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]
