"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class FracError(Exception):
    """Base class for every error raised by :mod:`fraccore`."""


class DomainError(FracError, ValueError):
    """A parameter or argument lies outside the admissible domain."""


class OrderError(DomainError):
    """A fractional order is outside the interval an operator accepts."""


class FellerDiamondError(DomainError):
    """Riesz-Feller parameters violate ``|theta| <= min(alpha, 2 - alpha)``."""

    def __init__(self, alpha: float, theta: float) -> None:
        self.alpha = alpha
        self.theta = theta
        self.bound = min(alpha, 2.0 - alpha)
        super().__init__(
            f"riesz-feller parameters outside the Feller-Takayasu diamond: "
            f"alpha={alpha:g}, theta={theta:g}, bound min(alpha, 2-alpha)={self.bound:g}"
        )


class GridError(DomainError):
    """Invalid grid construction or grid/operator mismatch."""


class SamplingError(FracError, ValueError):
    """A sampled value is not finite."""

    def __init__(self, node: float, value: float, index: int | None = None) -> None:
        self.node = node
        self.value = value
        self.index = index
        where = f"node {index} (x={node!r})" if index is not None else f"x={node!r}"
        super().__init__(f"non-finite value {value!r} at {where}")


class SeriesConvergenceError(FracError, ArithmeticError):
    """A series did not reach its tolerance within ``max_terms``.

    The partial sum accumulated so far is kept on the exception.
    """

    def __init__(self, name: str, partial_sum: float, terms: int) -> None:
        self.partial_sum = partial_sum
        self.terms = terms
        super().__init__(
            f"{name}: series did not converge after {terms} terms "
            f"(partial sum {partial_sum!r})"
        )


class SingularStepError(FracError, ArithmeticError):
    """The implicit step matrix of a time-marching scheme is singular."""
