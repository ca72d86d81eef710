"""Measurement and bound-inference result models."""

from pydantic import BaseModel, ConfigDict, Field

from models.terms import TermSum


class Measurement(BaseModel):
    """One observed cost ``t`` at input sizes ``(x, y)``."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=1)
    y: float = Field(ge=1)
    t: float = Field(gt=0)


class FitResult(BaseModel):
    """Irreducible unit-coefficient bound g with t <= constant * g on the data."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bound: TermSum
    constant: float = Field(gt=0)
    slack: float = Field(ge=1)
    robust: bool = False
    candidates_evaluated: int = 0
    admissible: int = 0


class Violation(BaseModel):
    """A measurement with t > constant * g(x, y); ``index`` is 0-based."""

    model_config = ConfigDict(frozen=True)

    index: int
    x: float
    y: float
    t: float
    bound_value: float
    excess: float  # t / (constant * g)


class FitReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    bound: str
    constant: float
    slack: float
    violations: list[Violation] = []

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "constant": self.constant,
            "slack": self.slack,
            "violations": [v.model_dump() for v in self.violations],
        }
