import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from fraccore.errors import DomainError, GridError, SingularStepError
from fraccore.grid import make_uniform_grid, sample
from fraccore.matrixop import StripMatrix, apply_strip, build_strip_matrix, solve_linear_fde
from fraccore.operators import gl_derivative
from fraccore.specfun import MLParams, gl_weights, mittag_leffler


def test_generator_examples():
    np.testing.assert_array_equal(build_strip_matrix(1.0, 2, 1.0).first_row, [1.0, -1.0, 0.0])
    np.testing.assert_allclose(build_strip_matrix(0.5, 3, 1.0).first_row, [1.0, -0.5, -0.125, -0.0625], rtol=1e-15)
    np.testing.assert_array_equal(build_strip_matrix(1.0, 3, 0.5).first_row, [2.0, -2.0, 0.0, 0.0])


@pytest.mark.parametrize(
    "args", [(0.0, 4, 1.0), (-1.0, 4, 1.0), (0.5, 0, 1.0), (0.5, 4, 0.0), (0.5, 4, 1.0, "diagonal")]
)
def test_build_rejects(args):
    with pytest.raises(DomainError):
        build_strip_matrix(*args)


@given(st.floats(0.05, 2.5), st.integers(1, 40), st.floats(0.01, 2.0), st.sampled_from(["upper", "lower"]))
def test_dense_is_triangular_toeplitz(alpha, n, tau, side):
    b = build_strip_matrix(alpha, n, tau, side)
    assert isinstance(b, StripMatrix) and b.size == n + 1
    np.testing.assert_allclose(b.first_row, gl_weights(alpha, n) / tau**alpha, rtol=1e-15)
    d = b.to_dense()
    tri = np.tril(d) if side == "upper" else np.triu(d)
    np.testing.assert_array_equal(d, tri)
    for k in range(-n, n + 1):
        diag = np.diagonal(d, k)
        assert np.all(diag == diag[0])
    v = np.cos(np.arange(n + 1.0))
    np.testing.assert_allclose(apply_strip(b, v), d @ v, rtol=1e-12, atol=1e-12 * np.max(np.abs(b.first_row)) * (n + 1))


def test_apply_examples():
    b = build_strip_matrix(0.7, 10, 0.1)
    assert np.all(apply_strip(b, np.zeros(11)) == 0.0)
    g = make_uniform_grid(0.0, 1.0, 10)
    ones = apply_strip(build_strip_matrix(1.0, 10, g.h), g.nodes)
    np.testing.assert_allclose(ones[1:], 1.0, rtol=1e-13)
    with pytest.raises(GridError):
        apply_strip(b, np.zeros(10))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.5])
def test_apply_matches_gl(alpha):
    g = make_uniform_grid(0.0, 1.0, 1024)
    f = sample(lambda t: math.exp(t) * math.sin(5 * t), g)
    b = build_strip_matrix(alpha, g.n, g.h)
    assert np.max(np.abs(apply_strip(b, f.values) - gl_derivative(f, alpha).values)) < 1e-13 * max(1.0, g.h**-alpha)
    right = build_strip_matrix(alpha, g.n, g.h, "lower")
    ref = gl_derivative(f, alpha, "right").values
    assert np.max(np.abs(apply_strip(right, f.values) - ref)) < 1e-13 * max(1.0, g.h**-alpha)


@settings(max_examples=40)
@given(st.floats(0.05, 0.95), st.floats(0.0, 1.0), st.integers(2, 200))
def test_discrete_composition(a1, frac, n):
    a2 = (1.0 - a1) * frac
    if a2 <= 0:
        return
    tau = 1.0 / n
    x = np.linspace(0.0, 1.0, n + 1)
    v = np.sin(math.pi * x) ** 2
    two = apply_strip(build_strip_matrix(a1, n, tau), apply_strip(build_strip_matrix(a2, n, tau), v))
    one = apply_strip(build_strip_matrix(a1 + a2, n, tau), v)
    scale = max(1.0, tau ** -(a1 + a2))
    assert np.max(np.abs(two - one)) <= 1e-10 * scale


# {{{ linear FDE


def test_fde_trivial_solution():
    g = make_uniform_grid(0.0, 1.0, 64)
    zero = sample(lambda t: 0.0, g)
    np.testing.assert_allclose(solve_linear_fde(0.5, 0.0, zero, 1.0).values, 1.0, rtol=0, atol=1e-14)


def test_fde_tail_keeps_relative_accuracy():
    # at alpha = 1 the scheme is implicit Euler, y_i = (1 - lam h)^-i exactly
    g = make_uniform_grid(0.0, 2.0, 100)
    y = solve_linear_fde(1.0, -36.0, sample(lambda t: 0.0, g), 1.0).values
    np.testing.assert_allclose(y, 1.72 ** -np.arange(101.0), rtol=1e-12)


def test_fde_classical_limit():
    errs = []
    for n in (100, 200, 400):
        g = make_uniform_grid(0.0, 1.0, n)
        y = solve_linear_fde(1.0, -1.0, sample(lambda t: 0.0, g), 1.0).values
        errs.append(np.max(np.abs(y - np.exp(-g.nodes))))
    assert errs[2] < 2e-3
    assert errs[0] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_fde_mittag_leffler_solution():
    errs = []
    for n in (128, 512):
        g = make_uniform_grid(0.0, 1.0, n)
        y = solve_linear_fde(0.5, -1.0, sample(lambda t: 0.0, g), 1.0).values
        exact = np.array([mittag_leffler(MLParams(0.5), -(t**0.5)) for t in g.nodes])
        # E_{1/2}(-z) = exp(z^2) erfc(z)
        np.testing.assert_allclose(exact, special.erfcx(np.sqrt(g.nodes)), rtol=1e-12)
        errs.append(np.max(np.abs(y - exact)))
    assert errs[1] < errs[0] and errs[1] < 2e-2


def test_fde_with_forcing():
    # D^a y = -y + f with y = t^2: f = 2 t^(2-a) / Gamma(3-a) + t^2
    alpha = 0.6
    g = make_uniform_grid(0.0, 1.0, 1024)
    forcing = sample(lambda t: 2.0 * t ** (2.0 - alpha) / math.gamma(3.0 - alpha) + t * t, g)
    y = solve_linear_fde(alpha, -1.0, forcing, 0.0).values
    assert np.max(np.abs(y - g.nodes**2)) < 5e-3


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(-50.0, -0.01), st.floats(0.1, 10.0))
def test_fde_decay_is_monotone(alpha, lam, y0):
    g = make_uniform_grid(0.0, 2.0, 100)
    y = solve_linear_fde(alpha, lam, sample(lambda t: 0.0, g), y0).values
    assert np.all(np.diff(y) <= 0.0)
    assert np.all(y > 0.0)


def test_fde_rejects():
    g = make_uniform_grid(0.0, 1.0, 4)
    zero = sample(lambda t: 0.0, g)
    with pytest.raises(DomainError):
        solve_linear_fde(1.5, -1.0, zero, 1.0)
    # omega_0 / h^a equals lam exactly
    with pytest.raises(SingularStepError):
        solve_linear_fde(1.0, 4.0, zero, 1.0)


# }}}
