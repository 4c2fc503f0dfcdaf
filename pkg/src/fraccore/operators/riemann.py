r"""Riemann-Liouville, Caputo, Grünwald-Letnikov and Marchaud operators.

All left-sided operators integrate from the first grid node ``a``; the
right-sided versions are obtained by mirroring the sample.
"""

from __future__ import annotations

import math

import numpy as np

from fraccore.errors import DomainError
from fraccore.grid import SampledFunction, _product_weights, finite_diff
from fraccore.operators._common import FracOrder, Interval, Side, causal_convolve, on_side, order_value
from fraccore.operators._quadrature import cell_weights
from fraccore.specfun import gl_integral_weights, gl_weights

__all__ = [
    "caputo_derivative",
    "caputo_diffusive",
    "gl_derivative",
    "gl_integral",
    "jumarie_derivative",
    "marchaud_derivative",
    "rl_derivative",
    "rl_integral",
]


# {{{ Riemann-Liouville


def _rl_integral_left(f: SampledFunction, alpha: float) -> SampledFunction:
    if alpha == 0.0:
        return f.with_values(f.values.copy())
    if alpha < 1.0:
        w = _product_weights(alpha, f.grid.h, f.grid.n)
        return f.with_values(w.apply(f.values) / math.gamma(alpha))
    # J^alpha = J^(alpha - 1) J^1, with J^1 the cumulative trapezoid rule
    trap = _product_weights(1.0, f.grid.h, f.grid.n)
    return _rl_integral_left(f.with_values(trap.apply(f.values)), alpha - 1.0)


def rl_integral(
    f: SampledFunction, alpha: FracOrder | float, side: Side | str = Side.LEFT
) -> SampledFunction:
    r"""Riemann-Liouville integral :math:`J^\alpha f`.

    For :math:`0 < \alpha < 1` the integrand is replaced by its
    piecewise-linear interpolant and integrated exactly against the kernel,
    giving :math:`O(h^2)` accuracy for smooth ``f``. Larger orders are
    composed from the cumulative trapezoid rule and ``alpha = 0`` is the
    identity.
    """
    a = order_value(alpha, Interval.NONNEGATIVE, "rl_integral")
    return on_side(side, f, lambda g: _rl_integral_left(g, a))


def rl_derivative(
    f: SampledFunction, alpha: FracOrder | float, side: Side | str = Side.LEFT
) -> SampledFunction:
    r"""Riemann-Liouville derivative :math:`\frac{d}{dx} J^{1-\alpha} f` for :math:`0 < \alpha \le 1`.

    The right-sided derivative is the mirror image of the left one, i.e.
    :math:`-\frac{d}{dx} J_{b^-}^{1-\alpha} f`; at ``alpha = 1`` it equals ``-f'``.
    The value at the lower end is a one-sided difference of a function that
    generally behaves like :math:`(x - a)^{1-\alpha}` and is not meaningful.
    """
    a = order_value(alpha, Interval.UNIT_CLOSED, "rl_derivative")

    def left(g: SampledFunction) -> SampledFunction:
        if a == 1.0:
            return finite_diff(g, 1)
        return finite_diff(_rl_integral_left(g, 1.0 - a), 1)

    return on_side(side, f, left)


def jumarie_derivative(f: SampledFunction, alpha: FracOrder | float) -> SampledFunction:
    """Riemann-Liouville derivative of ``f - f(a)``; vanishes on constants."""
    a = order_value(alpha, Interval.UNIT_OPEN, "jumarie_derivative")
    return rl_derivative(f - float(f.values[0]), a)


# }}}


# {{{ Caputo


def caputo_derivative(f: SampledFunction, alpha: FracOrder | float) -> SampledFunction:
    r"""Caputo derivative by the L1 scheme.

    .. math::

        D^\alpha f(x_i) \approx \frac{h^{-\alpha}}{\Gamma(2 - \alpha)}
            \sum_{k=0}^{i-1} b_k (f_{i-k} - f_{i-k-1}),
        \qquad b_k = (k+1)^{1-\alpha} - k^{1-\alpha}.

    This is :math:`J^{1-\alpha}` applied to the piecewise-constant derivative
    of the linear interpolant; the error is :math:`O(h^{2-\alpha})`.
    """
    a = order_value(alpha, Interval.UNIT_CLOSED, "caputo_derivative")
    if a == 1.0:
        return finite_diff(f, 1)
    h = f.grid.h
    n = f.grid.n
    k = np.arange(n, dtype=float)
    b = (k + 1.0) ** (1.0 - a) - k ** (1.0 - a)
    out = np.zeros(n + 1)
    out[1:] = causal_convolve(b, np.diff(f.values))
    return f.with_values(out * h**-a / math.gamma(2.0 - a))


def _phi1(z: np.ndarray) -> np.ndarray:
    # (1 - e^{-z}) / z, continuous at 0
    small = z < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 - 0.5 * z, -np.expm1(-safe) / safe)


def caputo_diffusive(
    f: SampledFunction, alpha: FracOrder | float, quad_nodes: int = 64
) -> SampledFunction:
    r"""Caputo derivative through its diffusive (Yuan-Agrawal) representation.

    .. math::

        D^\alpha f(t) = \frac{\sin \pi\alpha}{\pi} \int_0^\infty s^{\alpha-1} \psi(s, t)\,ds,
        \qquad \partial_t \psi = -s \psi + f'(t),\quad \psi(s, 0) = 0.

    Each :math:`\psi(s, \cdot)` is advanced exactly for a piecewise-constant
    :math:`f'`. After :math:`s = e^y` the two halves :math:`y < 0` and
    :math:`y > 0` decay like :math:`e^{\alpha y}` and :math:`e^{-(1-\alpha)y}`
    and each gets ``quad_nodes`` Gauss-Laguerre points.
    """
    a = order_value(alpha, Interval.UNIT_OPEN, "caputo_diffusive")
    if int(quad_nodes) != quad_nodes or quad_nodes < 4:
        raise DomainError(f"caputo_diffusive needs at least 4 quadrature nodes, got {quad_nodes!r}")

    tau, wq = np.polynomial.laguerre.laggauss(int(quad_nodes))
    y = np.concatenate([-tau / a, np.minimum(tau / (1.0 - a), 690.0)])
    s = np.exp(y)
    # s^alpha psi(s) dy becomes e^{-tau} psi on the left half, e^{-tau} s psi on the right
    weights = np.concatenate([wq / a, wq / (1.0 - a) * s[tau.size :]])

    h = f.grid.h
    decay = np.exp(-s * h)
    step = h * _phi1(s * h)
    df = np.diff(f.values) / h
    psi = np.zeros_like(s)
    out = np.zeros(f.grid.size)
    for i, g in enumerate(df, start=1):
        psi = decay * psi + step * g
        out[i] = np.dot(weights, psi)
    return f.with_values(out * math.sin(math.pi * a) / math.pi)


# }}}


# {{{ Grünwald-Letnikov


def gl_derivative(
    f: SampledFunction,
    alpha: FracOrder | float,
    side: Side | str = Side.LEFT,
    memory: int | None = None,
) -> SampledFunction:
    r"""Grünwald-Letnikov derivative :math:`h^{-\alpha}\sum_k \omega_k f(x \mp kh)`.

    The sample is extended by zero outside the grid. With ``memory=L`` only
    the last ``L`` steps of history are kept (short memory principle).
    """
    a = order_value(alpha, Interval.POSITIVE, "gl_derivative")
    n = f.grid.n
    if memory is not None:
        if int(memory) != memory or memory < 1 or memory > n:
            raise DomainError(f"memory must be an integer in [1, {n}], got {memory!r}")
        memory = int(memory)
    w = gl_weights(a, n if memory is None else memory)
    scale = f.grid.h**-a

    def left(g: SampledFunction) -> SampledFunction:
        return g.with_values(causal_convolve(w, g.values) * scale)

    return on_side(side, f, left)


def gl_integral(
    f: SampledFunction, alpha: FracOrder | float, side: Side | str = Side.LEFT
) -> SampledFunction:
    r"""Grünwald-Letnikov integral :math:`h^\alpha \sum_k \frac{\Gamma(k+\alpha)}{\Gamma(\alpha) k!} f(x \mp kh)`."""
    a = order_value(alpha, Interval.NONNEGATIVE, "gl_integral")
    if a == 0.0:
        return f.with_values(f.values.copy())
    w = gl_integral_weights(a, f.grid.n)
    scale = f.grid.h**a

    def left(g: SampledFunction) -> SampledFunction:
        return g.with_values(causal_convolve(w, g.values) * scale)

    return on_side(side, f, left)


# }}}


# {{{ Marchaud


def _marchaud_left(f: SampledFunction, alpha: float, k0: int) -> SampledFunction:
    n = f.grid.n
    h = f.grid.h
    v = f.values
    x = np.arange(n + 1) * h

    a_cell, b_cell = cell_weights(alpha, n + 1)
    # node weights for the cells [k0, i]; c[k0] only sees the cell to its right
    c = np.zeros(n + 1)
    if k0 <= n:
        c[k0] = a_cell[k0]
        c[k0 + 1 :] = a_cell[k0 + 1 : n + 1] + b_cell[k0:n]
    csum = np.cumsum(c)
    far = v * csum - causal_convolve(c, v)
    # the last node i has only the cell to its left: remove A_i (f_i - f_0)
    idx = np.arange(n + 1)
    tail = idx > k0
    far[tail] -= a_cell[idx[tail]] * (v[tail] - v[0])
    far[idx <= k0] = 0.0
    far *= h**-alpha

    # Taylor model on [0, eps]: f(x) - f(x - y) ~ f'(x) y
    eps = np.minimum(k0 * h, x)
    near = finite_diff(f, 1).values * eps ** (1.0 - alpha) / (1.0 - alpha)

    out = np.empty(n + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        boundary = v / x**alpha
    out[1:] = boundary[1:] + alpha * (far[1:] + near[1:])
    out[0] = out[1] if n >= 1 else 0.0
    return f.with_values(out / math.gamma(1.0 - alpha))


def marchaud_derivative(
    f: SampledFunction,
    alpha: FracOrder | float,
    side: Side | str = Side.LEFT,
    eps: float | None = None,
) -> SampledFunction:
    r"""Marchaud derivative on a finite interval.

    .. math::

        D^\alpha f(x) = \frac{f(x)}{\Gamma(1-\alpha)(x-a)^\alpha}
            + \frac{\alpha}{\Gamma(1-\alpha)} \int_a^x \frac{f(x) - f(y)}{(x-y)^{1+\alpha}}\,dy.

    The part of the integral with :math:`x - y \ge \varepsilon` uses product
    weights on the linear interpolant of ``f``; on :math:`[0, \varepsilon]`
    the difference is replaced by :math:`f'(x)(x-y)`. ``eps`` defaults to ``h``
    and is rounded to a whole number of steps. The lower end, where the
    boundary term is infinite, copies its neighbour.
    """
    a = order_value(alpha, Interval.UNIT_OPEN, "marchaud_derivative")
    h = f.grid.h
    if eps is None:
        eps = h
    if not eps >= h * (1 - 1e-12):
        raise DomainError(f"marchaud eps must be >= h={h:g}, got {eps!r}")
    k0 = max(1, int(round(eps / h)))
    return on_side(side, f, lambda g: _marchaud_left(g, a, k0))


# }}}
