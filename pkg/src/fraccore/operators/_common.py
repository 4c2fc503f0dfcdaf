"""Order validation, sidedness and small helpers shared by the operators."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from fraccore.errors import OrderError
from fraccore.grid import Grid1D, SampledFunction


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def parse(cls, value: Side | str) -> Side:
        if isinstance(value, Side):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise OrderError(f"side must be 'left' or 'right', got {value!r}") from None


class Interval(enum.Enum):
    """Admissible ranges for a fractional order."""

    UNIT_OPEN = "(0,1)"
    UNIT_CLOSED = "(0,1]"
    UNIT_WITH_ZERO = "[0,1)"
    TWO_OPEN = "(0,2)"
    TWO_CLOSED = "(0,2]"
    ONE_TWO = "(1,2)"
    POSITIVE = ">0"
    NONNEGATIVE = ">=0"

    def contains(self, alpha: float) -> bool:
        return {
            Interval.UNIT_OPEN: 0 < alpha < 1,
            Interval.UNIT_CLOSED: 0 < alpha <= 1,
            Interval.UNIT_WITH_ZERO: 0 <= alpha < 1,
            Interval.TWO_OPEN: 0 < alpha < 2,
            Interval.TWO_CLOSED: 0 < alpha <= 2,
            Interval.ONE_TWO: 1 < alpha < 2,
            Interval.POSITIVE: alpha > 0,
            Interval.NONNEGATIVE: alpha >= 0,
        }[self]


@dataclass(frozen=True)
class FracOrder:
    """An order ``alpha`` checked against the interval an operator admits."""

    alpha: float
    admissible: Interval = Interval.POSITIVE

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not (math.isfinite(a) and self.admissible.contains(a)):
            raise OrderError(f"order alpha={self.alpha!r} outside {self.admissible.value}")
        object.__setattr__(self, "alpha", a)

    def __float__(self) -> float:
        return self.alpha


def order_value(alpha: FracOrder | float, admissible: Interval, what: str) -> float:
    """Return ``alpha`` as a float after checking it lies in ``admissible``."""
    a = float(alpha.alpha if isinstance(alpha, FracOrder) else alpha)
    if not (math.isfinite(a) and admissible.contains(a)):
        raise OrderError(f"{what}: order alpha={a:g} outside {admissible.value}")
    return a


def flipped(f: SampledFunction) -> SampledFunction:
    """Mirror ``x -> a + b - x``; turns right-sided operators into left-sided ones."""
    return f.with_values(f.values[::-1])


def on_side(side: Side | str, f: SampledFunction, left_op) -> SampledFunction:
    """Apply a left-sided operator, or its mirror image for ``side='right'``."""
    if Side.parse(side) is Side.LEFT:
        return left_op(f)
    return flipped(left_op(flipped(f)))


def causal_convolve(kernel: np.ndarray, values: np.ndarray) -> np.ndarray:
    """``out[i] = sum_{k<=i} kernel[k] values[i-k]``."""
    n = values.size
    return np.convolve(kernel[:n], values)[:n]


def same_grid(grid: Grid1D, values: np.ndarray) -> SampledFunction:
    return SampledFunction(grid, values)
