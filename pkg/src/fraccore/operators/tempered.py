r"""Tempered fractional derivatives and integrals.

The integral operator starts at the lower grid end (zero extension). The
derivative operators continue the sample below the grid by its boundary
value, so they annihilate constants; the integrals over :math:`(0, \infty)`
then split into a grid part (product weights on the linear interpolant of
:math:`g(y) e^{-\lambda y}`) and an exact tail in terms of upper incomplete
gamma functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraccore.errors import DomainError, OrderError
from fraccore.grid import SampledFunction, finite_diff
from fraccore.operators._common import Side, causal_convolve, on_side
from fraccore.operators._quadrature import cell_weights, curvature_weights, power_tail
from fraccore.operators.riemann import _rl_integral_left

__all__ = ["TemperedParams", "tempered_apply"]


@dataclass(frozen=True)
class TemperedParams:
    alpha: float
    lam: float = 0.0

    def __post_init__(self) -> None:
        a, lam = float(self.alpha), float(self.lam)
        if not (math.isfinite(a) and a > 0):
            raise OrderError(f"tempered order must be positive, got {a!r}")
        if not (math.isfinite(lam) and lam >= 0):
            raise DomainError(f"tempering lambda must be >= 0, got {lam!r}")


def _tempered_integral_left(f: SampledFunction, alpha: float, lam: float) -> SampledFunction:
    x = f.grid.nodes - f.grid.a
    up = np.exp(lam * x)
    inner = _rl_integral_left(f.with_values(f.values * up), alpha).values
    return f.with_values(np.exp(-lam * x) * inner)


def _tempered_derivative_left(f: SampledFunction, alpha: float, lam: float) -> np.ndarray:
    r"""Integral of the generator form, left side, without its prefactor.

    Returns :math:`\int_0^\infty G(y) e^{-\lambda y} y^{-1-\alpha} dy` with
    :math:`G(y) = f(x - y) - f(x)` (plus :math:`y f'(x)` when ``alpha > 1``).
    """
    n = f.grid.n
    h = f.grid.h
    v = f.values
    i = np.arange(n + 1, dtype=float)
    m = np.arange(n + 1, dtype=float)
    corr = alpha > 1.0
    f1 = finite_diff(f, 1).values
    slope = f1 * h if corr else np.zeros(n + 1)

    # node weights in units of h, damping folded into the integrand
    a_cell, b_cell = cell_weights(alpha, n + 1)
    first = 1.0 / (1.0 - alpha) if alpha < 1 else 1.0 / (2.0 - alpha)
    w = np.zeros(n + 1)
    if n >= 1:
        w[1] = first + a_cell[1]
        w[2:] = a_cell[2 : n + 1] + b_cell[1:n]
    damp = np.exp(-lam * h * np.arange(n + 2))
    wd = w * damp[: n + 1]
    total = causal_convolve(wd, v) - v * np.cumsum(wd)
    if corr:
        total += slope * np.cumsum(m * wd)

    # the cell [i, i+1] leaves the grid, where f = 0
    b_eff = b_cell[: n + 1].copy()
    b_eff[0] = first
    total += b_eff * (-v + (i + 1.0) * slope) * damp[1 : n + 2]

    # leading interpolation error: minus sum_m q_m g''(m + 1/2) / 2, g'' in units of h
    if n >= 2:
        f2 = finite_diff(f, 2).values
        q = curvature_weights(alpha, n - 1)
        e = q * np.exp(-lam * h * (np.arange(n) + 0.5))
        local = f2 + 2.0 * lam * f1 + lam**2 * v
        mid = 0.5 * (local[:-1] + local[1:])
        g2 = np.zeros(n + 1)
        g2[1:] = causal_convolve(e, mid)
        esum = np.concatenate([[0.0], np.cumsum(e)])
        g2 -= lam**2 * v * esum
        if corr:
            ymom = np.concatenate([[0.0], np.cumsum(e * (np.arange(n) + 0.5) * h)])
            g2 += f1 * (-2.0 * lam * esum + lam**2 * ymom)
        total -= 0.5 * h**2 * g2

    y0 = (i + 1.0) * h
    tail = -v * power_tail(alpha, lam, y0, 0)
    if corr:
        tail += f1 * power_tail(alpha, lam, y0, 1)
    return total * h**-alpha + tail


def tempered_apply(
    f: SampledFunction,
    p: TemperedParams,
    mode: str = "deriv",
    side: Side | str = Side.LEFT,
) -> SampledFunction:
    r"""Tempered operators with rate :math:`\lambda \ge 0`.

    ``mode="integ"`` is the tempered integral

    .. math::

        \mathfrak{I}^{\alpha,\lambda}_+ f(x) = \frac{1}{\Gamma(\alpha)}
            \int_a^x f(u) (x - u)^{\alpha-1} e^{-\lambda (x - u)}\,du
            = e^{-\lambda x} J^\alpha[e^{\lambda u} f](x),

    computed through :func:`rl_integral`. ``mode="deriv"`` is the generator
    form, for :math:`0 < \alpha < 1`

    .. math::

        \partial^{\alpha,\lambda}_+ f(x) = \frac{\alpha}{\Gamma(1-\alpha)}
            \int_0^\infty (f(x) - f(x-y)) e^{-\lambda y} y^{-\alpha-1}\,dy

    and for :math:`1 < \alpha < 2`

    .. math::

        \partial^{\alpha,\lambda}_+ f(x) = \frac{\alpha(\alpha-1)}{\Gamma(2-\alpha)}
            \int_0^\infty (f(x-y) - f(x) + y f'(x)) e^{-\lambda y} y^{-\alpha-1}\,dy,

    both with Fourier symbol :math:`(\lambda + ik)^\alpha - \lambda^\alpha`
    (minus :math:`ik\alpha\lambda^{\alpha-1}` in the second case).
    ``mode="rl_deriv"`` adds :math:`\lambda^\alpha f` (and
    :math:`\pm\alpha\lambda^{\alpha-1} f'`), which inverts ``integ``.
    """
    if not isinstance(p, TemperedParams):
        p = TemperedParams(*p)
    a, lam = p.alpha, p.lam
    if mode == "integ":
        return on_side(side, f, lambda g: _tempered_integral_left(g, a, lam))
    if mode not in ("deriv", "rl_deriv"):
        raise DomainError(f"tempered mode must be 'deriv', 'integ' or 'rl_deriv', got {mode!r}")
    if a == 1.0 or not a < 2.0:
        raise OrderError(f"tempered derivative needs alpha in (0,1) or (1,2), got alpha={a:g}")

    if a < 1.0:
        pref = a / math.gamma(1.0 - a)
        sign = -1.0
    else:
        pref = a * (a - 1.0) / math.gamma(2.0 - a)
        sign = 1.0

    def left(g: SampledFunction) -> SampledFunction:
        # below the grid f is continued by its boundary value f(a)
        out = sign * pref * _tempered_derivative_left(g - float(g.values[0]), a, lam)
        if mode == "rl_deriv":
            out = out + lam**a * g.values
            if a > 1.0:
                out = out + a * lam ** (a - 1.0) * finite_diff(g, 1).values
        return g.with_values(out)

    return on_side(side, f, left)
