r"""Time-fractional and distributed-order diffusion on a bounded interval.

The model problem is

.. math::

    \sum_j b_j D_\star^{\beta_j} u = \frac{\partial^2 u}{\partial x^2},
    \qquad u(x, 0) = u_0(x),

with zero Dirichlet values at both ends of the space grid. A single order
is the case of one node with weight 1. Time derivatives use the L1 scheme
on a (possibly graded) time mesh, space uses the centered three-point
difference, and every step is one tridiagonal solve.

Since the discrete Laplacian maps :math:`x^2` to 2 exactly, the discrete
second moment obeys the same scheme as the scalar problem
:math:`\sum_j b_j D^{\beta_j} m = 2`, independent of the space step, as
long as the solution does not reach the boundary.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import linalg

from fraccore.errors import DomainError, GridError, OrderError
from fraccore.grid import Grid1D, SampledFunction
from fraccore.specfun import DEFAULT_SERIES, SeriesConfig, wright_auxiliary

__all__ = [
    "DiffusionProblem",
    "DistributedOrderSpec",
    "GreenFLQuery",
    "MappedCoordinates",
    "delta_initial",
    "first_moment",
    "fractional_complex_transform",
    "fundamental_solution",
    "green_function_fl",
    "second_moment",
    "solve_distributed_order_diffusion",
    "solve_time_fractional_diffusion",
    "uniform_order_density",
    "write_solution_csv",
]

_BOUNDARY_TOL = 1e-12


# {{{ problem description


@dataclass(frozen=True)
class DiffusionProblem:
    """Initial-boundary value problem for :func:`solve_time_fractional_diffusion`.

    :arg t_grid: ``[0, T]`` with ``n`` steps. With ``grading = r > 1`` the
        time levels are :math:`t_k = T (k/n)^r` instead of the uniform nodes,
        which resolves the initial layer and lets one run span many decades.
    :arg form: ``"caputo"`` solves the L1 discretization of the Caputo form;
        ``"rl"`` solves the equivalent integral form
        :math:`u = u_0 + J^\\beta u_{xx}` with product-trapezoid weights.
    """

    beta: float
    x_grid: Grid1D
    t_grid: Grid1D
    u0: SampledFunction
    form: str = "caputo"
    grading: float = 1.0

    def __post_init__(self) -> None:
        if not 0 < self.beta <= 1:
            raise OrderError(f"diffusion order beta must be in (0,1], got {self.beta!r}")
        if self.t_grid.a != 0.0:
            raise GridError(f"time grid must start at 0, got {self.t_grid.a!r}")
        if self.u0.grid != self.x_grid:
            raise GridError("initial condition is not sampled on x_grid")
        if self.form not in ("caputo", "rl"):
            raise DomainError(f"form must be 'caputo' or 'rl', got {self.form!r}")
        if not self.grading >= 1:
            raise DomainError(f"time grading must be >= 1, got {self.grading!r}")
        v = self.u0.values
        scale = max(1.0, float(np.max(np.abs(v))))
        if max(abs(v[0]), abs(v[-1])) > _BOUNDARY_TOL * scale:
            raise DomainError(
                f"initial condition must vanish at the boundary, got u0(a)={v[0]:.3g}, u0(b)={v[-1]:.3g}"
            )

    def times(self) -> np.ndarray:
        tg = self.t_grid
        return tg.b * (np.arange(tg.n + 1) / tg.n) ** self.grading


@dataclass(frozen=True)
class DistributedOrderSpec:
    """Discrete order density: orders ``nodes`` with weights ``weights``."""

    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    def __init__(self, nodes: Sequence[float], weights: Sequence[float]) -> None:
        nodes = tuple(float(b) for b in nodes)
        weights = tuple(float(w) for w in weights)
        if not nodes or len(nodes) != len(weights):
            raise DomainError(f"need matching non-empty nodes and weights, got {len(nodes)} and {len(weights)}")
        if any(not 0 < b <= 1 for b in nodes):
            raise OrderError(f"order-density nodes must lie in (0,1], got {nodes}")
        if any(b2 <= b1 for b1, b2 in zip(nodes, nodes[1:])):
            raise DomainError(f"order-density nodes must be strictly increasing, got {nodes}")
        if any(not w >= 0 for w in weights):
            raise DomainError(f"order-density weights must be >= 0, got {weights}")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise DomainError(f"order-density weights must sum to 1, got {math.fsum(weights)!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


def uniform_order_density(n: int = 16) -> DistributedOrderSpec:
    """Gauss-Legendre discretization of the uniform density ``b = 1`` on ``(0, 1)``."""
    x, w = np.polynomial.legendre.leggauss(n)
    w = 0.5 * w
    # absorb the last ulp so the weights sum to one
    w[-1] = 1.0 - math.fsum(w[:-1])
    return DistributedOrderSpec(0.5 * (x + 1.0), w)


def delta_initial(x_grid: Grid1D, x0: float = 0.0) -> SampledFunction:
    """Discrete delta: ``1/h`` at the node nearest to ``x0``, unit discrete mass."""
    i = int(round((x0 - x_grid.a) / x_grid.h))
    if not 0 < i < x_grid.n:
        raise GridError(f"delta location {x0:g} is not an interior node of [{x_grid.a:g}, {x_grid.b:g}]")
    v = np.zeros(x_grid.size)
    v[i] = 1.0 / x_grid.h
    return SampledFunction(x_grid, v)


# }}}


# {{{ solvers


def _l1_weights(t: np.ndarray, n: int, beta: float) -> np.ndarray:
    r"""Coefficients of :math:`(u^k - u^{k-1})`, ``k = 1..n``, in the L1 approximation at ``t_n``."""
    if beta == 1.0:
        c = np.zeros(n)
        c[-1] = 1.0 / (t[n] - t[n - 1])
        return c
    dt = np.diff(t[: n + 1])
    hi = (t[n] - t[: n]) ** (1.0 - beta)
    lo = (t[n] - t[1 : n + 1]) ** (1.0 - beta)
    return (hi - lo) / (dt * math.gamma(2.0 - beta))


def _laplacian_bands(x_grid: Grid1D, diag_shift: float) -> np.ndarray:
    m = x_grid.n - 1
    r = 1.0 / x_grid.h**2
    ab = np.empty((3, m))
    ab[0, :] = -r
    ab[1, :] = diag_shift + 2.0 * r
    ab[2, :] = -r
    return ab


def _apply_laplacian(u: np.ndarray, h: float) -> np.ndarray:
    # interior nodes only, zero Dirichlet values outside
    out = -2.0 * u
    out[1:] += u[:-1]
    out[:-1] += u[1:]
    return out / h**2


def _solve_caputo(spec: DistributedOrderSpec, p: DiffusionProblem) -> np.ndarray:
    t = p.times()
    nt = t.size - 1
    u = np.zeros((nt + 1, p.x_grid.size))
    u[0] = p.u0.values
    inner = u[:, 1:-1]
    du = np.zeros((nt, inner.shape[1]))
    for n in range(1, nt + 1):
        c = np.zeros(n)
        for beta, w in zip(spec.nodes, spec.weights):
            if w:
                c += w * _l1_weights(t, n, beta)
        # c[n-1] multiplies the unknown increment u^n - u^{n-1}
        hist = c[:-1] @ du[: n - 1] if n > 1 else 0.0
        rhs = c[-1] * inner[n - 1] - hist
        ab = _laplacian_bands(p.x_grid, c[-1])
        inner[n] = linalg.solve_banded((1, 1), ab, rhs)
        du[n - 1] = inner[n] - inner[n - 1]
    return u


def _rectangle_rl_weights(t: np.ndarray, n: int, beta: float) -> np.ndarray:
    r"""Weights of :math:`J^\beta g(t_n) \approx \sum_{k=1}^n w_k g(t_k)`, ``g`` constant on each cell.

    Taking the right end of every cell keeps :math:`g(t_0)` out of the sum,
    which matters for delta initial data where :math:`u_{xx}(t_0)` is huge.
    """
    da = t[n] - t[:n]
    db = t[n] - t[1 : n + 1]
    return (da**beta - db**beta) / math.gamma(beta + 1.0)


def _solve_rl(p: DiffusionProblem) -> np.ndarray:
    t = p.times()
    nt = t.size - 1
    h = p.x_grid.h
    u = np.zeros((nt + 1, p.x_grid.size))
    u[0] = p.u0.values
    inner = u[:, 1:-1]
    lap = np.zeros_like(inner)
    for n in range(1, nt + 1):
        w = _rectangle_rl_weights(t, n, p.beta)
        # w[k-1] multiplies u_xx at t_k; the last one is implicit
        rhs = inner[0] + (w[:-1] @ lap[1:n] if n > 1 else 0.0)
        ab = _laplacian_bands(p.x_grid, 0.0) * w[-1]
        ab[1] += 1.0
        inner[n] = linalg.solve_banded((1, 1), ab, rhs)
        lap[n] = _apply_laplacian(inner[n], h)
    return u


def solve_time_fractional_diffusion(p: DiffusionProblem) -> np.ndarray:
    """Solve :math:`D_\\star^\\beta u = u_{xx}`; row ``k`` of the result is ``u`` at ``p.times()[k]``.

    The Caputo form is the L1 scheme, which is unconditionally stable,
    keeps delta initial data non-negative and conserves the discrete mass up
    to the boundary flux. The RL form goes through the integral equation
    :math:`u = u_0 + J^\beta u_{xx}` with implicit product-rectangle
    weights, first order in time.
    """
    if p.form == "rl":
        return _solve_rl(p)
    return _solve_caputo(DistributedOrderSpec([p.beta], [1.0]), p)


def solve_distributed_order_diffusion(spec: DistributedOrderSpec, p: DiffusionProblem) -> np.ndarray:
    """Solve :math:`\\sum_j b_j D_\\star^{\\beta_j} u = u_{xx}` (``p.beta`` and ``p.form`` are ignored)."""
    if not isinstance(spec, DistributedOrderSpec):
        raise DomainError(f"expected a DistributedOrderSpec, got {type(spec).__name__}")
    return _solve_caputo(spec, p)


def write_solution_csv(
    times: np.ndarray, x_grid: Grid1D, u: np.ndarray, path: str | Path | None = None
) -> str:
    """Dump ``u`` as ``t,x,u`` rows, time-major."""
    buf = io.StringIO()
    buf.write("t,x,u\n")
    x = x_grid.nodes
    for tk, row in zip(times, u):
        for xi, ui in zip(x, row):
            buf.write(f"{float(tk)!r},{float(xi)!r},{float(ui)!r}\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


# }}}


# {{{ Green function and diagnostics


@dataclass(frozen=True)
class GreenFLQuery:
    k: float
    s: float
    beta: float

    def __post_init__(self) -> None:
        if not self.s > 0:
            raise DomainError(f"Laplace variable s must be > 0, got {self.s!r}")
        if not 0 < self.beta <= 1:
            raise OrderError(f"beta must be in (0,1], got {self.beta!r}")


def green_function_fl(q: GreenFLQuery) -> float:
    r"""Fourier-Laplace transform :math:`s^{\beta-1} / (s^\beta + k^2)` of the Green function."""
    sb = q.s**q.beta
    return sb / q.s / (sb + q.k**2)


def fundamental_solution(
    beta: float, x: float, t: float, cfg: SeriesConfig = DEFAULT_SERIES
) -> float:
    r"""Green function of :math:`D_\star^\beta u = u_{xx}` on the whole line.

    :math:`\beta = 1` gives the Gaussian :math:`(4\pi t)^{-1/2} e^{-x^2/4t}`;
    otherwise :math:`\tfrac12 t^{-\beta/2} M_{\beta/2}(|x| t^{-\beta/2})`.
    """
    beta, x, t = float(beta), float(x), float(t)
    if not t > 0:
        raise DomainError(f"fundamental_solution needs t > 0, got {t!r}")
    if not 0 < beta <= 1:
        raise OrderError(f"beta must be in (0,1], got {beta!r}")
    if beta == 1.0:
        return math.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    scale = t ** (-beta / 2.0)
    return 0.5 * scale * wright_auxiliary(beta / 2.0, abs(x) * scale, "M", cfg)


def _mass(u_row: SampledFunction) -> float:
    mass = math.fsum(u_row.values) * u_row.grid.h
    if mass == 0.0:
        raise DomainError("moment of a row with zero total mass")
    return mass


def first_moment(u_row: SampledFunction) -> float:
    return math.fsum(u_row.x * u_row.values) * u_row.grid.h / _mass(u_row)


def second_moment(u_row: SampledFunction) -> float:
    r"""Normalized second moment :math:`\sum x_i^2 u_i / \sum u_i`."""
    return math.fsum(u_row.x**2 * u_row.values) * u_row.grid.h / _mass(u_row)


@dataclass(frozen=True)
class MappedCoordinates:
    r"""Nodes :math:`s_i = x_i^\alpha / \Gamma(1+\alpha)` of a fractional complex transform."""

    alpha: float
    nodes: np.ndarray = field(repr=False)

    def boltzmann(self, t: float) -> np.ndarray:
        r"""Similarity variable :math:`\chi = s / \sqrt{t}`."""
        if not t > 0:
            raise DomainError(f"boltzmann variable needs t > 0, got {t!r}")
        return self.nodes / math.sqrt(t)


def fractional_complex_transform(grid: Grid1D, alpha: float) -> MappedCoordinates:
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise OrderError(f"transform order must be in (0,1], got {alpha!r}")
    if grid.a < 0:
        raise GridError(f"fractional complex transform needs nonnegative nodes, grid starts at {grid.a:g}")
    s = grid.nodes**alpha / math.gamma(1.0 + alpha)
    s.setflags(write=False)
    return MappedCoordinates(alpha, s)


# }}}
