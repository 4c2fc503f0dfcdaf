r"""Two-sided operators: Riesz potential and derivative, Riesz-Feller, Weyl.

Samples are either extended by zero outside the grid or treated as one
period of a periodic function (the grid then spans exactly one period and
the last value repeats the first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraccore.errors import DomainError, FellerDiamondError, OrderError
from fraccore.grid import SampledFunction, finite_diff
from fraccore.operators._common import (
    FracOrder,
    Interval,
    Side,
    causal_convolve,
    flipped,
    order_value,
)
from fraccore.operators._quadrature import curvature_weights, node_weights
from fraccore.operators.riemann import gl_derivative, rl_integral

__all__ = [
    "FellerParams",
    "riesz_apply",
    "riesz_feller_derivative",
    "weyl_derivative",
]

_PERIODIC_RTOL = 1e-8


@dataclass(frozen=True)
class FellerParams:
    """Order and skewness of the Riesz-Feller derivative."""

    alpha: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        a, th = float(self.alpha), float(self.theta)
        if not 0 < a <= 2:
            raise OrderError(f"riesz-feller order alpha={a:g} outside (0,2]")
        if abs(th) > min(a, 2.0 - a) + 1e-15:
            raise FellerDiamondError(a, th)


def _periodic_values(f: SampledFunction, what: str) -> np.ndarray:
    v = f.values
    scale = max(1.0, float(np.max(np.abs(v))))
    if abs(v[-1] - v[0]) > _PERIODIC_RTOL * scale:
        raise DomainError(
            f"{what}: sample is not periodic on [{f.grid.a:g}, {f.grid.b:g}] "
            f"(|f(b) - f(a)| = {abs(v[-1] - v[0]):.3g})"
        )
    return v[:-1]


def _apply_multiplier(f: SampledFunction, symbol, what: str) -> SampledFunction:
    v = _periodic_values(f, what)
    n = v.size
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=f.grid.h)
    mult = np.asarray(symbol(xi), dtype=complex)
    mult[0] = 0.0
    if n % 2 == 0:
        mult[n // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(v)).real
    return f.with_values(np.append(out, out[0]))


# {{{ Riesz


def riesz_apply(
    f: SampledFunction,
    alpha: FracOrder | float,
    mode: str = "derivative",
    extension: str = "zero",
) -> SampledFunction:
    r"""Riesz derivative or potential in one dimension.

    ``mode="derivative"``, :math:`0 < \alpha < 2`, :math:`\alpha \ne 1`:

    .. math::

        D^\alpha f = -\frac{1}{2\cos(\alpha\pi/2)} (D_+^\alpha f + D_-^\alpha f)

    with Grünwald-Letnikov one-sided derivatives, whose Fourier symbol tends
    to :math:`-|k|^\alpha`. ``extension="periodic"`` evaluates the same
    difference operators on the periodic continuation via the FFT.

    ``mode="potential"``, :math:`0 \le \alpha < 1`: the symmetric integral
    :math:`(J_+^\alpha f + J_-^\alpha f) / (2\cos(\alpha\pi/2))` on the
    zero-extended sample.
    """
    a = float(alpha.alpha if isinstance(alpha, FracOrder) else alpha)
    if mode == "potential":
        a = order_value(a, Interval.UNIT_WITH_ZERO, "riesz potential")
        if extension != "zero":
            raise DomainError("riesz potential supports only extension='zero'")
        c = 2.0 * math.cos(a * math.pi / 2.0)
        return f.with_values(
            (rl_integral(f, a, Side.LEFT).values + rl_integral(f, a, Side.RIGHT).values) / c
        )
    if mode != "derivative":
        raise DomainError(f"riesz mode must be 'derivative' or 'potential', got {mode!r}")
    if a == 1.0:
        raise OrderError(f"riesz derivative undefined at alpha={a:g}")
    a = order_value(a, Interval.TWO_OPEN, "riesz derivative")
    c = -0.5 / math.cos(a * math.pi / 2.0)

    if extension == "zero":
        left = gl_derivative(f, a, Side.LEFT).values
        right = gl_derivative(f, a, Side.RIGHT).values
        return f.with_values(c * (left + right))
    if extension == "periodic":
        h = f.grid.h

        def symbol(xi: np.ndarray) -> np.ndarray:
            th = xi * h
            return c * h**-a * ((1.0 - np.exp(-1j * th)) ** a + (1.0 - np.exp(1j * th)) ** a)

        return _apply_multiplier(f, symbol, "riesz derivative")
    raise DomainError(f"extension must be 'zero' or 'periodic', got {extension!r}")


# }}}


# {{{ Riesz-Feller


def _left_lobe(f: SampledFunction, alpha: float) -> np.ndarray:
    r"""``h^alpha * int_0^inf (f(x - y) - f(x) [+ y f'(x)]) y^{-1-alpha} dy``, zero extension.

    The ``y f'(x)`` correction is used for ``alpha > 1`` only.
    """
    n = f.grid.n
    h = f.grid.h
    v = f.values
    w, a_cell, b_cell = node_weights(alpha, n)
    b_eff = b_cell[: n + 1].copy()
    # first cell: linear (alpha < 1) or quadratic (alpha > 1) from g(0) = 0
    b_eff[0] = 1.0 / (1.0 - alpha) if alpha < 1 else 1.0 / (2.0 - alpha)
    i = np.arange(n + 1, dtype=float)

    corr = alpha > 1.0
    slope = finite_diff(f, 1).values * h if corr else np.zeros(n + 1)
    m = np.arange(n + 1, dtype=float)

    # grid part, nodes m = 1..i
    inside = causal_convolve(w, v) - v * np.cumsum(w)
    if corr:
        inside += slope * np.cumsum(m * w)

    # outside the grid the sample is zero: g(u) = -f(x) + u * slope
    g_next = -v + (i + 1.0) * slope
    tail = b_eff * g_next - v * (i + 1.0) ** -alpha / alpha
    if corr:
        tail += slope * (i + 1.0) ** (1.0 - alpha) / (alpha - 1.0)

    # leading interpolation error, from f'' at cell midpoints
    out = inside + tail
    if n >= 2:
        f2 = finite_diff(f, 2).values
        mid = 0.5 * (f2[:-1] + f2[1:])
        q = curvature_weights(alpha, n - 1)
        out[1:] -= 0.5 * h**2 * causal_convolve(q, mid)
    return out


def riesz_feller_derivative(
    f: SampledFunction, p: FellerParams | tuple[float, float]
) -> SampledFunction:
    r"""Riesz-Feller derivative of order :math:`\alpha` and skewness :math:`\theta`.

    .. math::

        D^\alpha_\theta f(x) = \frac{\Gamma(1+\alpha)}{\pi} \Big[
            \sin\frac{(\alpha+\theta)\pi}{2} \int_0^\infty \frac{f(x+\xi) - f(x)}{\xi^{1+\alpha}}\,d\xi
          + \sin\frac{(\alpha-\theta)\pi}{2} \int_0^\infty \frac{f(x-\xi) - f(x)}{\xi^{1+\alpha}}\,d\xi \Big]

    For :math:`1 < \alpha < 2` the integrands carry the extra :math:`\mp\xi f'(x)`
    that makes them integrable. The Fourier symbol is
    :math:`-|k|^\alpha e^{-i\,\mathrm{sgn}(k)\theta\pi/2}`. Integrals use
    product weights on the linear interpolant, a Taylor model on the first
    cell, and exact tails for the zero extension. ``alpha = 2`` is the
    second derivative.
    """
    if not isinstance(p, FellerParams):
        p = FellerParams(*p)
    a, th = float(p.alpha), float(p.theta)
    if a == 1.0:
        raise OrderError("riesz-feller derivative at alpha=1 is not supported")
    if a == 2.0:
        return finite_diff(f, 2)
    h = f.grid.h
    left = _left_lobe(f, a)
    right = _left_lobe(flipped(f), a)[::-1]
    pref = math.gamma(1.0 + a) / math.pi * h**-a
    out = pref * (
        math.sin((a + th) * math.pi / 2.0) * right + math.sin((a - th) * math.pi / 2.0) * left
    )
    return f.with_values(out)


# }}}


# {{{ Weyl


def weyl_derivative(
    f: SampledFunction, alpha: FracOrder | float, side: Side | str = Side.LEFT
) -> SampledFunction:
    r"""Weyl derivative of a periodic sample via the Fourier multiplier :math:`(\pm ik)^\alpha`.

    The grid must span one period; ``f(b)`` has to equal ``f(a)`` to within
    ``1e-8`` of the sample scale. The mean and the Nyquist mode are dropped.
    """
    a = order_value(alpha, Interval.POSITIVE, "weyl_derivative")
    sign = 1.0 if Side.parse(side) is Side.LEFT else -1.0

    def symbol(xi: np.ndarray) -> np.ndarray:
        return np.abs(xi) ** a * np.exp(1j * sign * np.sign(xi) * a * np.pi / 2.0)

    return _apply_multiplier(f, symbol, "weyl_derivative")


# }}}
