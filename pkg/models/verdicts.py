"""Independence certificates and verdicts."""

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from analysis.rationals import Rational, format_rational
from models.terms import TermSum


class Witness(BaseModel):
    """A valuation along which the term strictly dominates every other term.

    ``finite-z`` means x = y^z; ``x-direction`` means y fixed and x growing,
    the z -> infinity limit.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["finite-z", "x-direction"]
    z: Optional[Rational] = None

    @model_validator(mode="after")
    def _z_matches_kind(self) -> "Witness":
        if self.kind == "finite-z" and (self.z is None or self.z < 0):
            raise ValueError("finite-z witness needs z >= 0")
        if self.kind == "x-direction" and self.z is not None:
            raise ValueError("x-direction witness carries no z")
        return self


class DominationCert(BaseModel):
    """Exponent pair of the term lies under lambda*p_j + (1 - lambda)*p_l componentwise."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    j: int = Field(ge=0)
    l: int = Field(ge=0)  # noqa: E741
    lam: Rational = Field(alias="lambda")

    @model_validator(mode="after")
    def _lambda_in_unit_interval(self) -> "DominationCert":
        if not 0 <= self.lam <= 1:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        return self


class FeasibleInterval(BaseModel):
    """Witness exponents z >= 0 for one term; ``upper=None`` means unbounded.

    ``lower=None`` would mean unbounded below; intervals produced by
    ``feasible_interval`` are always clipped to z >= 0 so lower is set.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lower: Optional[Rational] = Fraction(0)
    lower_strict: bool = False
    upper: Optional[Rational] = None
    upper_strict: bool = True
    x_direction: bool = False

    @property
    def is_empty(self) -> bool:
        if self.lower is None or self.upper is None:
            return False
        if self.lower < self.upper:
            return False
        if self.lower == self.upper:
            return self.lower_strict or self.upper_strict
        return True

    def contains(self, z: Fraction) -> bool:
        if self.is_empty:
            return False
        if self.lower is not None and (z < self.lower or (self.lower_strict and z == self.lower)):
            return False
        if self.upper is not None and (z > self.upper or (self.upper_strict and z == self.upper)):
            return False
        return True


class Verdict(BaseModel):
    """Per-term independence decision with exactly one certificate."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    term_index: int = Field(ge=0)
    independent: bool
    witness: Optional[Witness] = None
    domination: Optional[DominationCert] = None

    @model_validator(mode="after")
    def _one_certificate(self) -> "Verdict":
        if self.independent and (self.witness is None or self.domination is not None):
            raise ValueError("an independent verdict carries a witness and no domination")
        if not self.independent and (self.domination is None or self.witness is not None):
            raise ValueError("a dependent verdict carries a domination and no witness")
        return self

    def to_json(self) -> dict:
        """External certificate schema; term numbers are 1-based."""
        out: dict = {"term": self.term_index + 1, "independent": self.independent}
        if self.witness is not None:
            w: dict = {"kind": self.witness.kind}
            if self.witness.z is not None:
                w["z"] = format_rational(self.witness.z)
            out["witness"] = w
        if self.domination is not None:
            out["domination"] = {
                "j": self.domination.j + 1,
                "l": self.domination.l + 1,
                "lambda": format_rational(self.domination.lam),
            }
        return out


class Reduction(BaseModel):
    """Irreducible core of a sum plus the Theta-equivalence constant."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    reduced: TermSum
    constant: Rational
    kept: tuple[int, ...]
    removed: tuple[Verdict, ...] = ()
