"""Exception types raised by the library."""

from __future__ import annotations


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class SingularityError(ValueError):
    """A kernel or potential was evaluated at its singular point."""


class SingularSystemError(ArithmeticError):
    """A dense factorization produced a zero (or numerically zero) pivot.

    ``log10_condition`` carries the conditioning estimate at failure time
    (``inf`` when a pivot is exactly zero).
    """

    def __init__(self, message: str, log10_condition: float = float("inf")):
        super().__init__(message)
        self.log10_condition = log10_condition


class NonConvergenceError(RuntimeError):
    """The regularized iteration hit ``max_steps`` above the discrepancy level."""

    def __init__(self, message: str, diagnostics=None, solution=None):
        super().__init__(message)
        self.diagnostics = diagnostics
        self.solution = solution


class NoAdmissibleWavenumberError(RuntimeError):
    """Every candidate wavenumber gave a singular amplitude matrix."""
