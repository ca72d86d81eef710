"""Monomial term and canonical sum-of-terms models."""

from fractions import Fraction
from typing import Iterable

from pydantic import BaseModel, ConfigDict, field_validator

from analysis.rationals import Rational


class Term(BaseModel):
    """One monomial ``coeff * x^exp_a * y^exp_b``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeff: Rational = Fraction(1)
    exp_a: Rational = Fraction(0)
    exp_b: Rational = Fraction(0)

    @field_validator("coeff")
    @classmethod
    def _positive_coeff(cls, v: Fraction) -> Fraction:
        if v <= 0:
            raise ValueError(f"coefficient must be positive, got {v}")
        return v

    @field_validator("exp_a", "exp_b")
    @classmethod
    def _nonnegative_exponent(cls, v: Fraction) -> Fraction:
        if v < 0:
            raise ValueError(f"exponent must be nonnegative, got {v}")
        return v

    @property
    def exponents(self) -> tuple[Fraction, Fraction]:
        return (self.exp_a, self.exp_b)

    @property
    def degree(self) -> Fraction:
        return self.exp_a + self.exp_b


class TermSum(BaseModel):
    """Terms with distinct exponent pairs, sorted by (exp_a, exp_b) ascending.

    Duplicated exponent pairs are merged by summing coefficients when the
    model is built, so two sums are equal exactly when they denote the same
    polynomial.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    terms: tuple[Term, ...] = ()

    @field_validator("terms")
    @classmethod
    def _canonical(cls, terms: tuple[Term, ...]) -> tuple[Term, ...]:
        merged: dict[tuple[Fraction, Fraction], Fraction] = {}
        for term in terms:
            key = term.exponents
            merged[key] = merged.get(key, Fraction(0)) + term.coeff
        return tuple(
            Term(coeff=coeff, exp_a=a, exp_b=b)
            for (a, b), coeff in sorted(merged.items())
        )

    @classmethod
    def of(cls, terms: Iterable[Term]) -> "TermSum":
        return cls(terms=tuple(terms))

    @classmethod
    def from_exponents(
        cls, pairs: Iterable[tuple[Fraction, Fraction]], coeff: Fraction = Fraction(1)
    ) -> "TermSum":
        return cls(terms=tuple(Term(coeff=coeff, exp_a=a, exp_b=b) for a, b in pairs))

    @property
    def exponents(self) -> list[tuple[Fraction, Fraction]]:
        return [t.exponents for t in self.terms]

    def subsum(self, indices: Iterable[int]) -> "TermSum":
        return TermSum(terms=tuple(self.terms[i] for i in indices))
