"""Exception hierarchy shared by the library and the CLI exit-code mapping."""

from __future__ import annotations


class OrderStatError(Exception):
    """Base class for all library errors."""


class DomainError(OrderStatError, ValueError):
    """Argument outside the domain of an operation (bad u, r, k, n, or spec)."""


class NonexistentMoment(OrderStatError, ArithmeticError):
    """The requested expectation diverges for this distribution."""


class NumericalFailure(OrderStatError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float = float("nan"), error: float = float("nan")):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class BoundaryMaximizer(OrderStatError):
    """The objective was still increasing at the last bidder count searched."""

    def __init__(self, n_max: int, result=None):
        super().__init__(
            f"objective still increasing at n_max={n_max}; no interior maximizer on the range"
        )
        self.n_max = n_max
        self.result = result
