import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

import oracles
from fraccore.errors import DomainError, SeriesConvergenceError
from fraccore.specfun import (
    MLParams,
    MultiIndexML,
    SeriesConfig,
    gl_integral_weights,
    gl_weights,
    mittag_leffler,
    mittag_leffler_array,
    multi_index_ml,
    pochhammer,
    prabhakar_ml,
    rabotnov,
    recip_gamma,
    wright,
    wright_auxiliary,
)

TOL = SeriesConfig().tol


def cond_tol(terms) -> float:
    """10 tol scaled by the size of the largest partial sums (cancellation)."""
    return 10.0 * TOL * max(1.0, math.fsum(abs(t) for t in terms))


# {{{ gamma, pochhammer, weights


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.0, 0.0), (-3.0, 0.0)])
def test_recip_gamma_trivial(x, expected):
    assert recip_gamma(x) == expected


def test_recip_gamma_at_two_and_a_half():
    assert recip_gamma(2.5) == pytest.approx(1.0 / oracles.lanczos_gamma(2.5), rel=1e-13)
    assert recip_gamma(2.5) == pytest.approx(0.7522528, abs=1e-7)


@given(st.floats(0.1, 20.0))
def test_recip_gamma_against_lanczos(x):
    assert recip_gamma(x) * oracles.lanczos_gamma(x) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(-30.0, -0.01).filter(lambda x: abs(x - round(x)) > 1e-6))
def test_recip_gamma_negative_arguments(x):
    assert recip_gamma(x) * oracles.lanczos_gamma(x) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("g, n, expected", [(3.0, 4, 360.0), (7.3, 0, 1.0), (0.5, 2, 0.75)])
def test_pochhammer(g, n, expected):
    assert pochhammer(g, n) == pytest.approx(expected, rel=1e-15)


def test_gl_weights_examples():
    np.testing.assert_allclose(gl_weights(0.5, 3), [1.0, -0.5, -0.125, -0.0625], rtol=1e-15)
    np.testing.assert_array_equal(gl_weights(1.0, 3), [1.0, -1.0, 0.0, 0.0])
    np.testing.assert_array_equal(gl_weights(0.7, 0), [1.0])


@given(st.floats(0.01, 3.0), st.integers(1, 60))
def test_gl_weights_match_binomial(alpha, n):
    w = gl_weights(alpha, n)
    k = np.arange(n + 1)
    direct = (-1.0) ** k * special.binom(alpha, k)
    np.testing.assert_allclose(w, direct, rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0])
def test_gl_weights_reject_non_positive(alpha):
    with pytest.raises(DomainError):
        gl_weights(alpha, 4)


@settings(max_examples=30)
@given(st.floats(0.05, 1.0))
def test_gl_partial_sums_vanish(alpha):
    s = np.abs(np.cumsum(gl_weights(alpha, 400)))
    assert np.all(np.diff(s) <= 1e-15)
    n = np.arange(16, 401)
    assert np.all(s[16:] <= 2.0 * n**-alpha)


def test_gl_integral_weights_are_negative_order():
    w = gl_integral_weights(0.5, 5)
    k = np.arange(6)
    np.testing.assert_allclose(w, (-1.0) ** k * special.binom(-0.5, k), rtol=1e-14)


# }}}


# {{{ Mittag-Leffler family


@pytest.mark.parametrize(
    "alpha, beta, x, expected",
    [(1.0, 1.0, 1.0, math.e), (2.0, 1.0, -1.0, math.cos(1.0)), (0.0, 1.0, 0.5, 2.0)],
)
def test_ml_examples(alpha, beta, x, expected):
    assert mittag_leffler(MLParams(alpha, beta), x) == pytest.approx(expected, rel=1e-13)


@given(st.floats(-10.0, 10.0))
def test_ml_exp_invariant(x):
    terms = [x**k / math.factorial(k) for k in range(80)]
    assert abs(mittag_leffler(MLParams(1.0), x) - math.exp(x)) <= cond_tol(terms)


@given(st.floats(-5.0, 5.0))
def test_ml_cos_invariant(x):
    terms = [x ** (2 * k) / math.factorial(2 * k) for k in range(60)]
    assert abs(mittag_leffler(MLParams(2.0), -x * x) - math.cos(x)) <= cond_tol(terms)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("beta", [0.5, 1.0])
def test_ml_two_parameter_recursion(alpha, beta):
    for x in np.linspace(-2.0, 2.0, 17):
        lhs = mittag_leffler(MLParams(alpha, beta), x)
        rhs = x * mittag_leffler(MLParams(alpha, alpha + beta), x) + recip_gamma(beta)
        terms = [x**k / oracles.lanczos_gamma(alpha * k + beta) for k in range(80)]
        assert abs(lhs - rhs) <= cond_tol(terms)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.2, 2.0), st.floats(-8.0, 8.0))
def test_ml_against_high_precision_series(alpha, beta, x):
    ref = oracles.ml_series(alpha, beta, x)
    assert mittag_leffler(MLParams(alpha, beta), x) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("x", [-31.0, -40.0, -100.0, -1000.0])
def test_ml_half_order_asymptotic_regime(x):
    # E_{1/2}(-z) = exp(z^2) erfc(z)
    assert mittag_leffler(MLParams(0.5), x) == pytest.approx(special.erfcx(-x), rel=1e-8)


@pytest.mark.parametrize("x", [-35.0, -60.0])
def test_ml_cos_asymptotic_regime(x):
    assert mittag_leffler(MLParams(2.0), x) == pytest.approx(math.cos(math.sqrt(-x)), abs=1e-8)


@pytest.mark.parametrize("alpha, beta, x", [(1.5, 1.0, -40.0), (0.8, 1.0, -45.0), (1.2, 0.7, -32.0)])
def test_ml_large_negative_against_series(alpha, beta, x):
    ref = oracles.ml_series(alpha, beta, x)
    assert mittag_leffler(MLParams(alpha, beta), x) == pytest.approx(ref, rel=1e-8, abs=1e-10)


def test_ml_large_positive_argument():
    assert mittag_leffler(MLParams(1.0), 50.0) == pytest.approx(math.exp(50.0), rel=1e-13)
    assert mittag_leffler(MLParams(2.0), 40.0) == pytest.approx(math.cosh(math.sqrt(40.0)), rel=1e-13)


def test_ml_array_matches_scalar():
    xs = np.linspace(-3.0, 3.0, 7)
    p = MLParams(0.7, 1.3)
    np.testing.assert_array_equal(mittag_leffler_array(p, xs), [mittag_leffler(p, x) for x in xs])


def test_ml_nonconvergence_carries_partial_sum():
    with pytest.raises(SeriesConvergenceError) as info:
        mittag_leffler(MLParams(1.0), 5.0, SeriesConfig(max_terms=3))
    assert info.value.partial_sum == pytest.approx(1.0 + 5.0 + 12.5)
    assert info.value.terms == 3


def test_params_validation():
    with pytest.raises(DomainError):
        MLParams(-1.0)
    with pytest.raises(DomainError):
        MLParams(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        SeriesConfig(tol=0.0)
    with pytest.raises(DomainError):
        SeriesConfig(max_terms=0)
    with pytest.raises(DomainError):
        MultiIndexML([1.0, -1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        MultiIndexML([1.0], [1.0, 1.0])


@settings(max_examples=30)
@given(st.floats(0.2, 2.0), st.floats(0.1, 2.0), st.floats(-3.0, 3.0))
def test_prabhakar_gamma_one_is_bitwise_ml(alpha, beta, x):
    p = MLParams(alpha, beta, 1.0)
    assert prabhakar_ml(p, x) == mittag_leffler(p, x)


def test_prabhakar_examples():
    assert prabhakar_ml(MLParams(1.0, 1.0, 2.0), 0.0) == 1.0
    ref = oracles.prabhakar_series(1.0, 1.0, 2.0, 0.3)
    assert prabhakar_ml(MLParams(1.0, 1.0, 2.0), 0.3) == pytest.approx(ref, rel=1e-14)
    # E^2_{1,1}(x) = (1 + x) e^x
    assert prabhakar_ml(MLParams(1.0, 1.0, 2.0), 0.3) == pytest.approx(1.3 * math.exp(0.3), rel=1e-14)


def test_multi_index_examples():
    assert multi_index_ml(MultiIndexML([1.0], [1.0]), 1.0) == pytest.approx(math.e, rel=1e-14)
    assert multi_index_ml(MultiIndexML([1.0, 1.0], [1.0, 1.0]), 0.0) == 1.0
    ref = oracles.multi_index_series([2.0, 2.0], [1.0, 1.0], 0.5)
    assert multi_index_ml(MultiIndexML([2.0, 2.0], [1.0, 1.0]), 0.5) == pytest.approx(ref, rel=1e-13)


def test_rabotnov_examples():
    assert rabotnov(0.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)
    assert rabotnov(0.5, 1.0, 0.0) == 0.0
    assert rabotnov(0.5, 0.0, 4.0) == pytest.approx(2.0 / oracles.lanczos_gamma(1.5), rel=1e-13)
    assert rabotnov(0.5, 0.0, 4.0) == pytest.approx(2.2567583, abs=1e-7)


# }}}


# {{{ Wright


def test_wright_examples():
    assert wright(0.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)
    assert wright(1.0, 1.0, 0.0) == 1.0
    ref = oracles.wright_series(-0.5, 0.5, -1.0)
    assert wright(-0.5, 0.5, -1.0) == pytest.approx(ref, rel=1e-13)
    assert wright(-0.5, 0.5, -1.0) == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), rel=1e-13)


def test_wright_rejects_lambda():
    with pytest.raises(DomainError):
        wright(-1.0, 1.0, 1.0)


def test_wright_auxiliary_examples():
    assert wright_auxiliary(0.5, 1.0, "M") == pytest.approx(0.4393913, abs=1e-7)
    assert wright_auxiliary(0.5, 0.0, "M") == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-15)
    for nu in (0.0, 1.0, 1.5):
        with pytest.raises(DomainError):
            wright_auxiliary(nu, 1.0)


@given(st.sampled_from([0.25, 0.5, 0.75]), st.floats(-3.0, 3.0))
def test_wright_f_equals_nu_z_m(nu, z):
    f = wright_auxiliary(nu, z, "F")
    m = wright_auxiliary(nu, z, "M")
    terms = [abs(z) ** n / math.factorial(n) * abs(recip_gamma(-nu * n)) for n in range(1, 80)]
    assert abs(f - nu * z * m) <= cond_tol(terms)


@pytest.mark.parametrize("nu, z", [(0.25, 1.0), (0.25, 3.0), (0.75, 0.5)])
def test_m_wright_against_series(nu, z):
    assert wright_auxiliary(nu, z, "M") == pytest.approx(oracles.m_wright_direct(nu, z), rel=1e-12)


# }}}
