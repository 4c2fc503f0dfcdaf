r"""Product weights for hypersingular kernels :math:`u^{-1-\alpha}`.

The integrand ``g`` is interpolated linearly on cells ``[m, m+1]`` (unit
spacing) and integrated exactly against the kernel. ``A[m]`` multiplies
``g(m)`` and ``B[m]`` multiplies ``g(m+1)``.
"""

from __future__ import annotations

import numpy as np
from scipy import special


def cell_weights(alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``A, B`` for cells ``m = 1..n`` (index 0 is left zero)."""
    m = np.arange(1, n + 1, dtype=float)
    dp = -((m + 1.0) ** -alpha - m**-alpha) / alpha
    dq = ((m + 1.0) ** (1.0 - alpha) - m ** (1.0 - alpha)) / (1.0 - alpha)
    a = np.zeros(n + 1)
    b = np.zeros(n + 1)
    a[1:] = (m + 1.0) * dp - dq
    b[1:] = dq - m * dp
    return a, b


def node_weights(alpha: float, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Toeplitz node weights ``W[m]`` for ``m = 0..n`` plus ``A`` and ``B``.

    ``W[1]`` contains the first cell ``[0, 1]``: linear from ``g(0) = 0`` when
    ``alpha < 1`` and quadratic (``g`` has a double zero) when ``alpha > 1``.
    """
    a, b = cell_weights(alpha, n + 1)
    w = np.zeros(n + 1)
    if n >= 1:
        first = 1.0 / (1.0 - alpha) if alpha < 1 else 1.0 / (2.0 - alpha)
        w[1] = first + a[1]
        w[2:] = a[2 : n + 1] + b[1:n]
    return w, a, b


def upper_gamma(s: float, x: np.ndarray) -> np.ndarray:
    r""":math:`\Gamma(s, x)` for ``s > -2`` not an integer, ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if s > 0:
        return special.gammaincc(s, x) * special.gamma(s)
    # Gamma(s, x) = (Gamma(s + 1, x) - x^s e^{-x}) / s
    return (upper_gamma(s + 1.0, x) - x**s * np.exp(-x)) / s


def power_tail(alpha: float, lam: float, y0: np.ndarray, power: int) -> np.ndarray:
    r""":math:`\int_{y_0}^\infty y^{p} e^{-\lambda y} y^{-1-\alpha}\,dy` for ``p`` in {0, 1}."""
    y0 = np.asarray(y0, dtype=float)
    s = power - alpha
    if lam == 0.0:
        return y0**s / (-s)
    return lam ** (-s) * upper_gamma(s, lam * y0)


def curvature_weights(alpha: float, n: int) -> np.ndarray:
    r"""``q[m] = \int_m^{m+1} (u - m)(m + 1 - u) u^{-1-\alpha} du``.

    Linear interpolation overshoots :math:`c u^2` by exactly
    :math:`c (u - m)(m + 1 - u)` on a cell, so ``-sum q[m] g''/2`` removes the
    leading interpolation error. ``q[0]`` matches the first-cell model:
    nonzero for the linear model (``alpha < 1``), zero for the quadratic one.
    """
    q = np.zeros(n + 1)
    if alpha < 1:
        q[0] = 1.0 / (1.0 - alpha) - 1.0 / (2.0 - alpha)
    if n >= 1:
        m = np.arange(1, n + 1, dtype=float)

        def r(p: float) -> np.ndarray:
            e = p - alpha
            return ((m + 1.0) ** e - m**e) / e

        q[1:] = -r(2.0) + (2.0 * m + 1.0) * r(1.0) - m * (m + 1.0) * r(0.0)
    return q
