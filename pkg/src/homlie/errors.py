"""Exception types raised across the package.

Everything that signals bad input derives from :class:`InputError`, which the
command line maps to exit status 2.
"""

from __future__ import annotations


class InputError(ValueError):
    """Invalid or inconsistent input."""


class RegistryMismatch(InputError):
    """Operands refer to different parameter registries."""


class UnknownParameter(InputError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at offset {position}"
        super().__init__(f"unknown parameter {name!r}{where}")


class ExprSyntaxError(InputError):
    """Lexical or grammatical error in a polynomial expression."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at offset {position}")


class NonlinearConstraint(InputError):
    def __init__(self, poly, reason: str = "degree > 1 in the unknowns"):
        self.poly = poly
        super().__init__(f"nonlinear constraint ({reason}): {poly}")


class InconsistentSystem(InputError):
    """A linear system reduced to 0 = c with c != 0."""


class NotUnipotent(InputError):
    """Order-0 term of a map series is not the identity."""
