"""Uniform grids, sampled functions and weakly singular product weights."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from fraccore.errors import DomainError, GridError, OrderError, SamplingError

__all__ = [
    "Grid1D",
    "SampledFunction",
    "SingularWeights",
    "finite_diff",
    "make_uniform_grid",
    "read_csv",
    "sample",
    "singular_weights",
    "write_csv",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[a, b]`` with ``n`` intervals."""

    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise GridError(f"grid ends must be finite, got [{self.a!r}, {self.b!r}]")
        if not self.b > self.a:
            raise GridError(f"grid needs b > a, got a={self.a!r}, b={self.b!r}")
        if int(self.n) != self.n or self.n < 1:
            raise GridError(f"grid needs n >= 1 intervals, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.n + 1) * self.h

    def node(self, i: int) -> float:
        return self.a + i * self.h


def make_uniform_grid(a: float, b: float, n: int) -> Grid1D:
    return Grid1D(float(a), float(b), n)


class SampledFunction:
    """Values of a function at the nodes of a :class:`Grid1D`."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid1D, values: np.ndarray) -> None:
        values = np.array(values, dtype=float)
        if values.shape != (grid.size,):
            raise GridError(f"expected {grid.size} values for {grid}, got shape {values.shape}")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            i = int(bad[0])
            raise SamplingError(grid.node(i), float(values[i]), i)
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    def __repr__(self) -> str:
        return f"SampledFunction({self.grid!r}, values=<{self.values.size} floats>)"

    def __len__(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values: np.ndarray) -> SampledFunction:
        return SampledFunction(self.grid, values)

    def _other(self, other: SampledFunction | float) -> np.ndarray | float:
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise GridError("operands live on different grids")
            return other.values
        return float(other)

    def __add__(self, other: SampledFunction | float) -> SampledFunction:
        return self.with_values(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: SampledFunction | float) -> SampledFunction:
        return self.with_values(self.values - self._other(other))

    def __mul__(self, other: SampledFunction | float) -> SampledFunction:
        return self.with_values(self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self) -> SampledFunction:
        return self.with_values(-self.values)


def sample(fn: Callable[[float], float], grid: Grid1D) -> SampledFunction:
    """Evaluate ``fn`` at every node; a non-finite value raises :class:`SamplingError`."""
    x = grid.nodes
    values = np.empty(x.size)
    with np.errstate(all="ignore"):
        for i, xi in enumerate(x):
            try:
                v = float(fn(float(xi)))
            except (ZeroDivisionError, OverflowError, ValueError):
                v = math.nan
            if not math.isfinite(v):
                raise SamplingError(float(xi), v, i)
            values[i] = v
    return SampledFunction(grid, values)


# {{{ product integration weights


def _binomial_tail(p: float, u: float, terms: int = 40) -> float:
    r""":math:`\sum_{k \ge 2} \binom{p}{k} u^k` for small ``|u|``."""
    c = p * (p - 1.0) / 2.0
    uk = u * u
    total = 0.0
    for k in range(2, terms):
        term = c * uk
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
        c *= (p - k) / (k + 1.0)
        uk *= u
    return total


def _second_difference_powers(p: float, count: int) -> np.ndarray:
    r"""``(m+1)^p - 2 m^p + (m-1)^p`` for ``m = 1..count - 1``; entry 0 is unused.

    For large ``m`` the direct formula cancels badly, so the binomial series
    :math:`m^p \sum_{k\ge2} \binom{p}{k} ((1/m)^k + (-1/m)^k)` is used instead.
    """
    out = np.zeros(count)
    m = np.arange(1, count, dtype=float)
    direct = (m + 1.0) ** p - 2.0 * m**p + (m - 1.0) ** p
    out[1:] = direct
    for j in np.flatnonzero(m >= 16):
        mm = m[j]
        u = 1.0 / mm
        out[j + 1] = mm**p * (_binomial_tail(p, u) + _binomial_tail(p, -u))
    return out


@dataclass(frozen=True)
class SingularWeights:
    r"""Product weights for :math:`\int_a^{x_i} (x_i - t)^{\alpha - 1} p(t)\,dt`.

    ``p`` is the piecewise-linear interpolant of the samples. Row ``i`` is
    ``w_{i,j} = d[i - j]`` for ``j >= 1`` and ``w_{i,0} = e[i]``, so the table
    is kept as a Toeplitz generator ``d`` plus the first column ``e``.
    """

    alpha: float
    h: float
    d: np.ndarray
    e: np.ndarray

    @property
    def n(self) -> int:
        return self.d.size - 1

    def row(self, i: int) -> np.ndarray:
        """Weights of row ``i`` (``i + 1`` entries, index ``j = 0..i``)."""
        w = np.empty(i + 1)
        w[0] = self.e[i]
        if i:
            w[1:] = self.d[i - 1 :: -1][:i]
        return w

    def apply(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.size != self.d.size:
            raise GridError(f"expected {self.d.size} values, got {values.size}")
        out = np.convolve(self.d, values)[: values.size]
        # the convolution used d[i] for column 0; swap in the boundary weight
        out -= self.d * values[0]
        out += self.e * values[0]
        return out


def _product_weights(alpha: float, h: float, n: int) -> SingularWeights:
    """Weights for any ``alpha > 0`` (``alpha = 1`` gives the trapezoid rule)."""
    p = alpha + 1.0
    c = h**alpha / (alpha * p)
    m = np.arange(n + 1, dtype=float)
    d = np.empty(n + 1)
    d[0] = c
    d[1:] = c * _second_difference_powers(p, n + 1)[1:]
    e = np.empty(n + 1)
    e[0] = 0.0
    i = m[1:]
    e[1:] = c * ((i - 1.0) ** p - (i - 1.0 - alpha) * i**alpha)
    # same cancellation as above: i^p ((1 - 1/i)^p - 1 + p/i)
    for k in range(16, n + 1):
        e[k] = c * k**p * _binomial_tail(p, -1.0 / k)
    return SingularWeights(alpha=alpha, h=h, d=d, e=e)


def singular_weights(alpha: float, grid: Grid1D) -> SingularWeights:
    r"""Piecewise-linear product integration weights for the kernel :math:`(x - t)^{\alpha - 1}`.

    Exact for piecewise-linear integrands; the row sums reproduce
    :math:`(x_i - a)^\alpha / \alpha`.
    """
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise OrderError(f"singular_weights requires 0 < alpha < 1, got {alpha!r}")
    return _product_weights(alpha, grid.h, grid.n)


# }}}


# {{{ classical differences


def finite_diff(f: SampledFunction, order: int) -> SampledFunction:
    """First or second derivative by finite differences.

    Central differences inside, second-order one-sided stencils at the ends.
    """
    n = f.grid.n
    h = f.grid.h
    v = f.values
    if order == 1:
        if n < 1:
            raise GridError("first differences need n >= 1")
        if n == 1:
            d = np.full(2, (v[1] - v[0]) / h)
        else:
            d = np.gradient(v, h, edge_order=2)
        return f.with_values(d)
    if order == 2:
        if n < 2:
            raise GridError(f"second differences need n >= 2, got n={n}")
        d = np.empty_like(v)
        d[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h**2
        if n >= 3:
            d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h**2
            d[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h**2
        else:
            d[0] = d[1]
            d[-1] = d[-2]
        return f.with_values(d)
    raise DomainError(f"finite_diff order must be 1 or 2, got {order!r}")


# }}}


# {{{ csv


def write_csv(f: SampledFunction, path: str | Path | None = None) -> str:
    """Serialize as ``x,value`` rows with shortest round-trip floats."""
    buf = io.StringIO()
    buf.write("x,value\n")
    for xi, vi in zip(f.x, f.values):
        buf.write(f"{float(xi)!r},{float(vi)!r}\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def read_csv(source: str | Path) -> SampledFunction:
    """Read an ``x,value`` file written by :func:`write_csv`.

    The nodes must be uniformly spaced; the grid is rebuilt from the first and
    last node and the row count.
    """
    text = Path(source).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "x,value":
        raise DomainError(f"{source}: expected header 'x,value'")
    xs, vs = [], []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 2:
            raise DomainError(f"{source}:{lineno}: expected two columns")
        try:
            xs.append(float(parts[0]))
            vs.append(float(parts[1]))
        except ValueError:
            raise DomainError(f"{source}:{lineno}: not a number") from None
    if len(xs) < 2:
        raise DomainError(f"{source}: need at least two rows")
    grid = Grid1D(xs[0], xs[-1], len(xs) - 1)
    if not np.allclose(grid.nodes, xs, rtol=0, atol=1e-9 * max(1.0, abs(grid.b), abs(grid.a))):
        raise GridError(f"{source}: nodes are not uniformly spaced")
    return SampledFunction(grid, np.array(vs))


# }}}
