"""Irreducible family parameters, generated exponent lists and witness plans."""

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from analysis.rationals import Rational
from models.terms import TermSum
from models.verdicts import FeasibleInterval


def constraint_violation(alpha: Fraction, beta: Fraction) -> str | None:
    """Name the first failing link of 0 < alpha < beta < 1 - alpha < 1, or None."""
    if not 0 < alpha:
        return f"0 < alpha fails (alpha = {alpha})"
    if not alpha < beta:
        return f"alpha < beta fails (alpha = {alpha}, beta = {beta})"
    if not beta < 1 - alpha:
        return f"beta < 1 - alpha fails (beta = {beta}, 1 - alpha = {1 - alpha})"
    if not 1 - alpha < 1:
        return f"1 - alpha < 1 fails (alpha = {alpha})"
    return None


class FamilySpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(ge=1)
    alpha: Rational
    beta: Rational
    a1: Rational
    b1: Rational
    valuation_cap: Optional[Rational] = None

    @model_validator(mode="after")
    def _check(self) -> "FamilySpec":
        problem = constraint_violation(self.alpha, self.beta)
        if problem:
            raise ValueError(problem)
        if self.a1 <= 0 or self.b1 <= 0:
            raise ValueError("a1 and b1 must be positive")
        if self.valuation_cap is not None and not self.b1 < self.valuation_cap * self.a1:
            raise ValueError("b1 < cap * a1 fails")
        return self


class Family(BaseModel):
    """Exponent pairs (a_i, b_i), a strictly increasing and b strictly decreasing."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theorem: Literal[1, 2, 3]
    spec: FamilySpec
    exponents: tuple[tuple[Rational, Rational], ...]

    @model_validator(mode="after")
    def _monotone(self) -> "Family":
        if len(self.exponents) != self.spec.k:
            raise ValueError(f"expected {self.spec.k} exponent pairs, got {len(self.exponents)}")
        for (a0, b0), (a1, b1) in zip(self.exponents, self.exponents[1:]):
            if not (a0 < a1 and b0 > b1):
                raise ValueError("a must increase and b must decrease strictly")
        return self

    @property
    def k(self) -> int:
        return len(self.exponents)

    def to_sum(self) -> TermSum:
        """Unit-coefficient TermSum; its canonical order is the family order."""
        return TermSum.from_exponents(self.exponents)


class WitnessPlan(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    z: tuple[Rational, ...]
    intervals: tuple[FeasibleInterval, ...]


class RatioRecord(BaseModel):
    """r(i, j) for 1 <= i < j <= k, indices 1-based."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    i: int
    j: int
    r: Rational
    r_decimal: str


class WitnessRecord(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    i: int
    z: Rational
    z_decimal: str


class PlotData(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ratios: tuple[RatioRecord, ...]
    witnesses: tuple[WitnessRecord, ...]
