"""Exception hierarchy shared by the analysis modules, the CLI and the service."""


class BigOhError(Exception):
    """Base class for every domain error raised by this package."""


class ExpressionSyntaxError(BigOhError, ValueError):
    """An expression string does not follow the grammar."""

    def __init__(self, message: str, position: int) -> None:
        self.message = message
        self.position = position
        super().__init__(f"{message} at position {position}")


class TermValueError(BigOhError, ValueError):
    """A syntactically valid term carries a value outside the supported class."""


class DomainError(BigOhError, ValueError):
    """Evaluation requested outside the domain x, y >= 1."""


class ParameterError(BigOhError, ValueError):
    """Operation parameters violate a documented constraint."""


class FitError(BigOhError, ValueError):
    """Bound inference cannot run on the given data or parameters."""
