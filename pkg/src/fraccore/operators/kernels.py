r"""Memory operators with non-singular kernels (Caputo-Fabrizio, GC, GRL).

.. math::

    D_{GC} f(x) = N(\alpha) \int_a^x k(x - t, \alpha) f'(t)\,dt,
    \qquad
    D_{GRL} f(x) = \frac{d}{dx} N(\alpha) \int_a^x k(x - t, \alpha) f(t)\,dt.

Convolutions are done by product integration: ``f`` is taken piecewise
linear and the kernel moments over each cell are computed with 16-point
Gauss-Legendre, so any smooth kernel is integrated to near round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from fraccore.errors import DomainError
from fraccore.grid import SampledFunction, finite_diff
from fraccore.operators._common import FracOrder, Interval, causal_convolve, order_value
from fraccore.specfun import MLParams, mittag_leffler_array

__all__ = [
    "KernelSpec",
    "caputo_fabrizio",
    "general_kernel_derivative",
]

KernelFn = Callable[[np.ndarray, float], np.ndarray]
Normalizer = Callable[[float], float]

KINDS = ("caputo_fabrizio_exp", "atangana_baleanu_ml", "atangana_gomez_gauss", "stretched_exp", "custom")


def _rate(alpha: float) -> float:
    return alpha / (1.0 - alpha)


def _default_normalizer(alpha: float) -> float:
    # M(alpha) / (1 - alpha) with M = 1
    return 1.0 / (1.0 - alpha)


@dataclass(frozen=True)
class KernelSpec:
    """A memory kernel ``k(x, alpha)`` with its normalizer ``N(alpha)``.

    :arg kind: one of ``caputo_fabrizio_exp``, ``atangana_baleanu_ml``,
        ``atangana_gomez_gauss``, ``stretched_exp`` or ``custom``.
    :arg beta_s: exponent of the stretched exponential (``> 0``, ``!= 1``).
    :arg func: kernel for ``kind="custom"``, vectorized in ``x``.
    """

    kind: str
    normalizer: Normalizer = field(default=_default_normalizer)
    beta_s: float | None = None
    func: KernelFn | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "stretched_exp":
            if self.beta_s is None or not self.beta_s > 0 or self.beta_s == 1:
                raise DomainError(f"stretched_exp needs beta_s > 0 and != 1, got {self.beta_s!r}")
        if self.kind == "custom" and self.func is None:
            raise DomainError("custom kernels need func")

    @classmethod
    def caputo_fabrizio(cls, m: Normalizer | None = None) -> KernelSpec:
        """Exponential kernel with ``N(alpha) = M(alpha) / (1 - alpha)``; ``M = 1`` by default."""
        if m is None:
            return cls("caputo_fabrizio_exp")
        return cls("caputo_fabrizio_exp", normalizer=lambda a: m(a) / (1.0 - a))

    def __call__(self, x: np.ndarray, alpha: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = _rate(alpha)
        if self.kind == "caputo_fabrizio_exp":
            return np.exp(-c * x)
        if self.kind == "atangana_baleanu_ml":
            return mittag_leffler_array(MLParams(alpha), -c * x)
        if self.kind == "atangana_gomez_gauss":
            return np.exp(-c * x**2)
        if self.kind == "stretched_exp":
            return np.exp(-c * x**self.beta_s)
        return np.asarray(self.func(x, alpha), dtype=float)

    def check(self, alpha: float, length: float) -> float:
        """Verify fading memory on ``[0, length]`` and return ``N(alpha)``."""
        norm = float(self.normalizer(alpha))
        if not math.isfinite(norm):
            raise DomainError(f"kernel normalizer is not finite at alpha={alpha:g}")
        x = np.linspace(0.0, length, 257)
        k = self(x, alpha)
        if not np.all(np.isfinite(k)):
            raise DomainError(f"{self.kind} kernel is not finite on [0, {length:g}]")
        if np.any(np.diff(k) > 1e-12 * max(1.0, float(np.max(np.abs(k))))):
            raise DomainError(f"{self.kind} kernel is not non-increasing (fading memory) on [0, {length:g}]")
        return norm


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _cell_moments(kernel: KernelSpec, alpha: float, h: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    r"""``P[m] = \int_0^h k((m-1)h + v)(1 - v/h) dv`` and ``Q[m]`` with ``v/h``, ``m = 1..n``."""
    v = 0.5 * h * (_GL_X + 1.0)
    wv = 0.5 * h * _GL_W
    m = np.arange(1, n + 1, dtype=float)
    k = kernel((m[:, None] - 1.0) * h + v[None, :], alpha)
    p = np.zeros(n + 1)
    q = np.zeros(n + 1)
    p[1:] = k @ (wv * (1.0 - v / h))
    q[1:] = k @ (wv * (v / h))
    return p, q


def general_kernel_derivative(
    f: SampledFunction,
    alpha: FracOrder | float,
    k: KernelSpec,
    mode: str = "GC",
) -> SampledFunction:
    """GC (derivative inside) or GRL (derivative outside) operator for kernel ``k``.

    GC integrates the piecewise-constant derivative of the linear interpolant,
    so it vanishes exactly on constants. GRL integrates the linear interpolant
    and differentiates the result with :func:`finite_diff`.
    """
    a = order_value(alpha, Interval.UNIT_OPEN, "general_kernel_derivative")
    mode = mode.upper()
    if mode not in ("GC", "GRL"):
        raise DomainError(f"mode must be 'GC' or 'GRL', got {mode!r}")
    grid = f.grid
    norm = k.check(a, grid.b - grid.a)
    p, q = _cell_moments(k, a, grid.h, grid.n)
    v = f.values
    if mode == "GC":
        # cell m back from x_i carries slope (f_{i-m+1} - f_{i-m}) / h
        out = np.zeros(grid.size)
        out[1:] = causal_convolve((p + q)[1:], np.diff(v)) / grid.h
        return f.with_values(norm * out)
    # sum_m P[m] f_{i-m+1} + Q[m] f_{i-m}
    inner = np.zeros(grid.size)
    inner[1:] = causal_convolve(p[1:], v[1:]) + causal_convolve(q[1:], v[:-1])
    return finite_diff(f.with_values(norm * inner), 1)


def caputo_fabrizio(
    f: SampledFunction, alpha: FracOrder | float, k: KernelSpec | None = None
) -> SampledFunction:
    r"""Caputo-Fabrizio derivative from the lower grid end ``a``.

    .. math::

        D^\alpha f(t) = \frac{M(\alpha)}{1-\alpha} \int_a^t f'(\tau)
            \exp\Big(-\frac{\alpha (t - \tau)}{1 - \alpha}\Big) d\tau

    This is the GC operator with the exponential kernel, and as
    :math:`\alpha \to 1^-` it tends to :math:`f'`.
    """
    if k is None:
        k = KernelSpec.caputo_fabrizio()
    if k.kind != "caputo_fabrizio_exp":
        raise DomainError(f"caputo_fabrizio needs the exponential kernel, got {k.kind!r}")
    return general_kernel_derivative(f, alpha, k, "GC")
