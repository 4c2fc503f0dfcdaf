"""Local fractional-type derivatives: conformable and Hausdorff (fractal)."""

from __future__ import annotations

import numpy as np

from fraccore.errors import DomainError, GridError
from fraccore.grid import SampledFunction, finite_diff
from fraccore.operators._common import FracOrder, Interval, order_value

__all__ = ["conformable_derivative", "hausdorff_fractal_derivative"]

VARIANTS = ("khalil", "katugampola")


def _require_positive_grid(f: SampledFunction, what: str) -> None:
    if not f.grid.a > 0:
        raise GridError(f"{what} needs t > 0 at every node, grid starts at {f.grid.a:g}")


def conformable_derivative(
    f: SampledFunction, alpha: FracOrder | float, variant: str = "khalil"
) -> SampledFunction:
    r"""Conformable derivative :math:`t^{1-\alpha} f'(t)`.

    Khalil's limit :math:`(f(t + \varepsilon t^{1-\alpha}) - f(t))/\varepsilon` and
    Katugampola's :math:`(f(t e^{\varepsilon t^{-\alpha}}) - f(t))/\varepsilon`
    share this value for differentiable ``f``; both use it.
    """
    a = order_value(alpha, Interval.UNIT_CLOSED, "conformable_derivative")
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    _require_positive_grid(f, "conformable_derivative")
    t = f.grid.nodes
    return f.with_values(t ** (1.0 - a) * finite_diff(f, 1).values)


def hausdorff_fractal_derivative(f: SampledFunction, sigma: float) -> SampledFunction:
    r"""Fractal derivative :math:`df / d(t^\sigma)`.

    Interior nodes use :math:`(f_{i+1} - f_{i-1}) / (t_{i+1}^\sigma - t_{i-1}^\sigma)`;
    the two ends use second-order one-sided differences in the variable
    :math:`t^\sigma`.
    """
    sigma = float(sigma)
    if not sigma > 0:
        raise DomainError(f"hausdorff order sigma must be > 0, got {sigma!r}")
    _require_positive_grid(f, "hausdorff_fractal_derivative")
    if f.grid.n < 2:
        raise GridError("hausdorff_fractal_derivative needs n >= 2")
    v = f.values
    s = f.grid.nodes**sigma
    out = np.gradient(v, s, edge_order=2)
    out[1:-1] = (v[2:] - v[:-2]) / (s[2:] - s[:-2])
    return f.with_values(out)
