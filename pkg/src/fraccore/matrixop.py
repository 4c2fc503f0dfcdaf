r"""Triangular strip matrices and linear fractional ODEs.

A strip matrix is the triangular Toeplitz matrix of Grünwald-Letnikov
weights divided by :math:`\tau^\alpha`. Only its generator row is stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fraccore.errors import DomainError, GridError, SingularStepError
from fraccore.grid import SampledFunction
from fraccore.operators._common import causal_convolve
from fraccore.specfun import gl_weights

__all__ = ["StripMatrix", "apply_strip", "build_strip_matrix", "solve_linear_fde"]


@dataclass(frozen=True)
class StripMatrix:
    """Generator ``first_row = gl_weights(alpha, n) / tau**alpha`` of a strip matrix.

    ``side="upper"`` is the left-sided operator (history lies at earlier
    nodes), ``side="lower"`` the right-sided one. In both cases the input
    vector is indexed in natural node order.
    """

    alpha: float
    tau: float
    n: int
    side: str
    first_row: np.ndarray

    @property
    def size(self) -> int:
        return self.n + 1

    def to_dense(self) -> np.ndarray:
        """Dense matrix acting on vectors in natural node order (for checks only)."""
        k = np.arange(self.size)
        diff = k[:, None] - k[None, :]
        if self.side == "lower":
            diff = -diff
        dense = np.zeros((self.size, self.size))
        mask = diff >= 0
        dense[mask] = self.first_row[diff[mask]]
        return dense


def build_strip_matrix(alpha: float, n: int, tau: float, side: str = "upper") -> StripMatrix:
    alpha, tau = float(alpha), float(tau)
    if not alpha > 0:
        raise DomainError(f"strip matrix order must be > 0, got {alpha!r}")
    if not (tau > 0 and math.isfinite(tau)):
        raise DomainError(f"strip matrix step must be > 0, got {tau!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"strip matrix needs n >= 1, got {n!r}")
    if side not in ("upper", "lower"):
        raise DomainError(f"side must be 'upper' or 'lower', got {side!r}")
    row = gl_weights(alpha, int(n)) / tau**alpha
    row.setflags(write=False)
    return StripMatrix(alpha=alpha, tau=tau, n=int(n), side=side, first_row=row)


def apply_strip(b: StripMatrix, v: np.ndarray) -> np.ndarray:
    """Multiply by the strip matrix in ``O(n^2)`` without forming it."""
    v = np.asarray(v, dtype=float)
    if v.shape != (b.size,):
        raise GridError(f"strip matrix of size {b.size} cannot act on shape {v.shape}")
    if b.side == "upper":
        return causal_convolve(b.first_row, v)
    return causal_convolve(b.first_row, v[::-1])[::-1]


def solve_linear_fde(
    alpha: float, lam: float, forcing: SampledFunction, y0: float
) -> SampledFunction:
    r"""Solve :math:`D^\alpha_C y = \lambda y + F(t)`, :math:`y(a) = y_0`, for :math:`0 < \alpha \le 1`.

    The Caputo derivative is the Grünwald-Letnikov derivative of
    :math:`y - y_0`. Writing :math:`c_i = \sum_{k \le i} \omega_k`, which are
    the weights of order :math:`\alpha - 1`, each implicit step solves

    .. math::

        (\omega_0 h^{-\alpha} - \lambda) y_i = F_i
            + h^{-\alpha} \Big(c_i y_0 - \sum_{k=1}^{i} \omega_k y_{i-k}\Big).

    Working with :math:`y` rather than :math:`y - y_0` keeps full relative
    accuracy once the solution has decayed far below :math:`y_0`.

    :raises SingularStepError: if :math:`|\omega_0 h^{-\alpha} - \lambda| < 10^{-14}`.
    """
    alpha, lam, y0 = float(alpha), float(lam), float(y0)
    if not 0 < alpha <= 1:
        raise DomainError(f"solve_linear_fde needs 0 < alpha <= 1, got {alpha!r}")
    grid = forcing.grid
    n = grid.n
    scale = grid.h**-alpha
    w = gl_weights(alpha, n)
    diag = w[0] * scale - lam
    if abs(diag) < 1e-14:
        raise SingularStepError(f"implicit step is singular: omega_0/h^alpha - lam = {diag:g}")

    # partial sums of w, i.e. the order alpha - 1 weights, without cancellation
    c = np.cumprod(np.concatenate(([1.0], 1.0 - alpha / np.arange(1.0, n + 1))))
    y = np.empty(n + 1)
    y[0] = y0
    f = forcing.values
    for i in range(1, n + 1):
        history = np.dot(w[1 : i + 1], y[i - 1 :: -1])
        y[i] = (f[i] + scale * (c[i] * y0 - history)) / diag
    return forcing.with_values(y)
