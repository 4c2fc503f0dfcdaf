"""Numerical fractional calculus: special functions, operators on uniform
grids, strip-matrix solvers and time-fractional diffusion."""

from fraccore.errors import (
    DomainError,
    FellerDiamondError,
    FracError,
    GridError,
    OrderError,
    SamplingError,
    SeriesConvergenceError,
    SingularStepError,
)
from fraccore.grid import Grid1D, SampledFunction, make_uniform_grid, read_csv, sample, write_csv

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FellerDiamondError",
    "FracError",
    "Grid1D",
    "GridError",
    "OrderError",
    "SampledFunction",
    "SamplingError",
    "SeriesConvergenceError",
    "SingularStepError",
    "make_uniform_grid",
    "read_csv",
    "sample",
    "write_csv",
]
