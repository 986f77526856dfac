from typing import Optional


class ModularFormsError(Exception):
    """Root of every error raised by the library."""

    exit_code = 2


class InvalidInputError(ModularFormsError, ValueError):
    """Bad parameters: weight, discriminant, group tag, point outside the domain."""

    exit_code = 2


class DomainError(InvalidInputError):
    """Evaluation point outside the region where an evaluator is valid."""


class PoleError(ModularFormsError, ArithmeticError):
    """The matrix sends the point to infinity (cz+d = 0 within tolerance)."""

    exit_code = 2


class SideConditionError(InvalidInputError):
    """A Poincare series construction whose side condition fails."""


class ToleranceError(ModularFormsError):
    """The requested accuracy cannot be reached with the current truncation."""

    exit_code = 3

    def __init__(self, message: str, achieved: Optional[float] = None):
        super().__init__(message)
        self.achieved = achieved


def exit_code_for(error: Exception) -> int:
    return getattr(error, "exit_code", 2) if isinstance(error, ModularFormsError) else 2
