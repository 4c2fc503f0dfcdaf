"""Fractional operators acting on :class:`~fraccore.grid.SampledFunction`."""

from fraccore.operators._common import FracOrder, Interval, Side
from fraccore.operators.erdelyi_kober import EKParams, erdelyi_kober
from fraccore.operators.kernels import KernelSpec, caputo_fabrizio, general_kernel_derivative
from fraccore.operators.local import conformable_derivative, hausdorff_fractal_derivative
from fraccore.operators.riemann import (
    caputo_derivative,
    caputo_diffusive,
    gl_derivative,
    gl_integral,
    jumarie_derivative,
    marchaud_derivative,
    rl_derivative,
    rl_integral,
)
from fraccore.operators.symmetric import (
    FellerParams,
    riesz_apply,
    riesz_feller_derivative,
    weyl_derivative,
)
from fraccore.operators.tempered import TemperedParams, tempered_apply

__all__ = [
    "EKParams",
    "FellerParams",
    "FracOrder",
    "Interval",
    "KernelSpec",
    "Side",
    "TemperedParams",
    "caputo_derivative",
    "caputo_diffusive",
    "caputo_fabrizio",
    "conformable_derivative",
    "erdelyi_kober",
    "general_kernel_derivative",
    "gl_derivative",
    "gl_integral",
    "hausdorff_fractal_derivative",
    "jumarie_derivative",
    "marchaud_derivative",
    "riesz_apply",
    "riesz_feller_derivative",
    "rl_derivative",
    "rl_integral",
    "tempered_apply",
    "weyl_derivative",
]
