"""Single-variable growth terms c * n^p * (log n)^l * base^(n^e)."""

from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from analysis.rationals import Rational, to_rational


class Order(str, Enum):
    """Outcome of an asymptotic comparison of f against g."""

    LESS = "<<"
    SAME = "~"
    GREATER = ">>"

    def mirror(self) -> "Order":
        return {Order.LESS: Order.GREATER, Order.GREATER: Order.LESS}.get(self, self)


class UniTerm(BaseModel):
    """``coeff * n^poly_exp * (log n)^log_exp * exp_base^(n^exp_arg_exp)``.

    Normalized so the no-exponential case is unique: base 1 forces
    exp_arg_exp = 0, and an exponential with exp_arg_exp = 0 is a constant
    folded into the coefficient.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeff: Rational = Fraction(1)
    poly_exp: Rational = Fraction(0)
    log_exp: Rational = Fraction(0)
    exp_base: Rational = Fraction(1)
    exp_arg_exp: Rational = Fraction(0)

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        base = to_rational(data.get("exp_base", 1))
        arg = to_rational(data.get("exp_arg_exp", 0))
        if base < 1:
            raise ValueError(f"exponential base must be >= 1, got {base}")
        if arg < 0:
            raise ValueError(f"exponential argument exponent must be >= 0, got {arg}")
        if base == 1:
            arg = Fraction(0)
        elif arg == 0:
            data["coeff"] = to_rational(data.get("coeff", 1)) * base
            base = Fraction(1)
        data["exp_base"], data["exp_arg_exp"] = base, arg
        return data

    @field_validator("coeff")
    @classmethod
    def _positive(cls, v: Fraction) -> Fraction:
        if v <= 0:
            raise ValueError(f"coefficient must be positive, got {v}")
        return v

    @property
    def growth_key(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Lexicographic growth order: exponential degree, base, power of n, power of log n."""
        return (self.exp_arg_exp, self.exp_base, self.poly_exp, self.log_exp)
