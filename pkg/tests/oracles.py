"""Reference values computed independently of fraccore."""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
from scipy import integrate

# {{{ gamma

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


# }}}


# {{{ series by brute force


def ml_series(alpha: float, beta: float, x: float, dps: int | None = None) -> float:
    """E_{alpha,beta}(x) by its power series in high precision arithmetic."""
    if dps is None:
        # enough digits to survive the cancellation of alternating terms
        growth = abs(x) ** (1.0 / alpha) if x else 0.0
        dps = 30 + int(growth / 2.0)
    with mpmath.workdps(dps):
        xs = mpmath.mpf(x)
        total = mpmath.mpf(0)
        k = 0
        small = 0
        while True:
            term = xs**k * mpmath.rgamma(mpmath.mpf(alpha) * k + beta)
            total += term
            # the terms peak near alpha k = |x|^(1/alpha)
            if abs(term) < mpmath.mpf(10) ** (-25) * max(1, abs(total)) and alpha * k > 2 * abs(x) ** (1 / alpha) + 5:
                small += 1
                if small > 3:
                    break
            else:
                small = 0
            k += 1
        return float(total)


def prabhakar_series(alpha: float, beta: float, gamma: float, x: float, terms: int = 50) -> float:
    total = 0.0
    for n in range(terms):
        total += float(mpmath.rf(gamma, n) * mpmath.mpf(x) ** n * mpmath.rgamma(alpha * n + beta) / mpmath.factorial(n))
    return total


def multi_index_series(rhos, mus, x: float, terms: int = 200) -> float:
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        for k in range(terms):
            den = mpmath.mpf(1)
            for r, m in zip(rhos, mus):
                den *= mpmath.rgamma(m + mpmath.mpf(k) / r)
            total += mpmath.mpf(x) ** k * den
        return float(total)


def wright_series(lam: float, mu: float, z: float, terms: int = 200) -> float:
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        for n in range(terms):
            total += mpmath.mpf(z) ** n * mpmath.rgamma(mpmath.mpf(lam) * n + mu) / mpmath.factorial(n)
        return float(total)


# }}}


# {{{ transforms


def talbot(fhat, t: float, n: int = 32) -> float:
    """Inverse Laplace transform by the fixed Talbot contour with ``n`` nodes."""
    r = 2.0 * n / (5.0 * t)
    acc = 0.5 * (fhat(complex(r, 0.0)) * math.exp(r * t)).real
    for k in range(1, n):
        th = k * math.pi / n
        cot = math.cos(th) / math.sin(th)
        s = r * th * complex(cot, 1.0)
        sigma = th + (th * cot - 1.0) * cot
        acc += (cmath.exp(t * s) * fhat(s) * complex(1.0, sigma)).real
    return r / n * acc


def fourier_cos_inverse(fk, x: float) -> float:
    r""":math:`\frac{1}{\pi}\int_0^\infty F(k)\cos(kx)\,dk` for real even ``F``."""
    if x == 0.0:
        val, _ = integrate.quad(fk, 0.0, np.inf, limit=400)
    else:
        val, _ = integrate.quad(fk, 0.0, np.inf, weight="cos", wvar=abs(x), limlst=200)
    return val / math.pi


def green_double_inversion(beta: float, x: float, t: float, n: int = 32) -> float:
    r"""Invert :math:`s^{\beta-1}/(s^\beta + k^2)` numerically in ``k`` and then in ``s``."""

    def in_s(s: complex) -> complex:
        sb = s**beta
        num = sb / s
        re = fourier_cos_inverse(lambda k: (num / (sb + k * k)).real, x)
        im = fourier_cos_inverse(lambda k: (num / (sb + k * k)).imag, x)
        return complex(re, im)

    return talbot(in_s, t, n)


def m_wright_direct(nu: float, z: float) -> float:
    """M-Wright function from its series at high precision."""
    with mpmath.workdps(50):
        total = mpmath.mpf(0)
        for n in range(400):
            total += (-mpmath.mpf(z)) ** n / mpmath.factorial(n) * mpmath.rgamma(1 - mpmath.mpf(nu) * (n + 1))
        return float(total)


# }}}


def l1_order_moment(betas, weights, t: float) -> float:
    r"""Second moment of the distributed-order Green function, by Talbot inversion of
    :math:`2 / (s \sum_j b_j s^{\beta_j})`."""

    def fhat(s: complex) -> complex:
        return 2.0 / (s * sum(w * s**b for b, w in zip(betas, weights)))

    return talbot(fhat, t)


def uniform_moment(t: float) -> float:
    r"""Second moment for the uniform order density, :math:`2\ln s / (s(s-1))` inverted."""
    return talbot(lambda s: 2.0 * cmath.log(s) / (s * (s - 1.0)), t)
