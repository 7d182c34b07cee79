"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FormcalcError(Exception):
    """Base class for every error raised by formcalc."""


class ParseError(FormcalcError):
    """Malformed expression text.

    Carries the byte offset of the failure and the token kinds that
    would have been accepted at that position.
    """

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class UnboundVariableError(FormcalcError):
    """A free variable had no value in the supplied bindings."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class EvaluationError(FormcalcError):
    """Numeric evaluation produced a non-finite value.

    The message names the offending subexpression and the bindings in
    effect when it failed.
    """


class FormMismatchError(FormcalcError):
    """Operands of a form operation had different degrees or boxes."""


class OutOfDomainError(FormcalcError):
    """A chain image or query point left the declared domain box."""


class NonPlanarSurfaceError(FormcalcError):
    """A surface handed to a planar theorem had nonzero z at a node."""


class PotentialExistenceError(FormcalcError):
    """The zero-condition (curl or divergence) failed, so no potential exists."""

    def __init__(self, message: str, residual: float = float("nan"),
                 worst_point: tuple[float, float, float] | None = None):
        self.residual = residual
        self.worst_point = worst_point
        super().__init__(message)
