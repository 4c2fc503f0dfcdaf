r"""Special functions and coefficient generators.

Everything here is scalar and pure.  Series are summed term by term until an
estimate of the remaining tail drops below ``SeriesConfig.tol``; the tail
estimate comes from a log-magnitude bound on each term, so terms that vanish
at poles of :math:`\Gamma` never stop a sum early.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import mpmath
import numpy as np

from fraccore.errors import DomainError, SeriesConvergenceError

__all__ = [
    "DEFAULT_SERIES",
    "MLParams",
    "MultiIndexML",
    "SeriesConfig",
    "gl_integral_weights",
    "gl_weights",
    "mittag_leffler",
    "mittag_leffler_array",
    "multi_index_ml",
    "pochhammer",
    "prabhakar_ml",
    "rabotnov",
    "recip_gamma",
    "wright",
    "wright_auxiliary",
]

# past this argument math.gamma overflows
_GAMMA_MAX_ARG = 170.0
_EPS = 2.0**-52


@dataclass(frozen=True)
class SeriesConfig:
    """Convergence control for every series in this module.

    :arg tol: absolute cutoff on the estimated remaining tail.
    :arg max_terms: hard cap on the number of summed terms.
    """

    tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise DomainError(f"series tolerance must be positive, got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_SERIES = SeriesConfig()


@dataclass(frozen=True)
class MLParams:
    r"""Parameters of :math:`E^{\gamma}_{\alpha,\beta}`.

    ``alpha = 0`` is accepted for the geometric special case
    :math:`E_{0,\beta}(x) = 1/(\Gamma(\beta)(1-x))`.
    """

    alpha: float
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha >= 0:
            raise DomainError(f"Mittag-Leffler alpha must be >= 0, got {self.alpha!r}")
        if not self.gamma > 0:
            raise DomainError(f"Prabhakar gamma must be > 0, got {self.gamma!r}")


@dataclass(frozen=True)
class MultiIndexML:
    """Multi-index Mittag-Leffler parameters ``(1/rho_i), (mu_i)``."""

    rhos: tuple[float, ...]
    mus: tuple[float, ...]

    def __init__(self, rhos: Sequence[float], mus: Sequence[float]) -> None:
        rhos = tuple(float(r) for r in rhos)
        mus = tuple(float(m) for m in mus)
        if len(rhos) != len(mus) or not rhos:
            raise DomainError("rhos and mus must be non-empty and of equal length")
        if any(not r > 0 for r in rhos):
            raise DomainError(f"all rhos must be > 0, got {rhos}")
        object.__setattr__(self, "rhos", rhos)
        object.__setattr__(self, "mus", mus)


# {{{ gamma helpers


def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _sin_pi(x: float) -> float:
    # sin(pi x) with argument reduction so large |x| keeps full accuracy
    k = round(x)
    r = x - k
    s = math.sin(math.pi * r)
    return -s if k % 2 else s


def recip_gamma(x: float) -> float:
    r"""Return :math:`1/\Gamma(x)`, exactly ``0.0`` at the poles of :math:`\Gamma`."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    if _is_pole(x):
        return 0.0
    if x > _GAMMA_MAX_ARG:
        return math.exp(-math.lgamma(x))
    g = math.gamma(x) if x > -_GAMMA_MAX_ARG else 0.0
    if g != 0.0 and math.isfinite(g):
        return 1.0 / g
    # large negative argument: reflection in log space
    s = _sin_pi(x)
    try:
        return math.copysign(math.exp(math.lgamma(1.0 - x) + math.log(abs(s)) - math.log(math.pi)), s)
    except OverflowError:
        return math.copysign(math.inf, s)


def _log_recip_gamma(x: float) -> tuple[float, float]:
    """``(log|1/Gamma(x)|, sign)``; sign is 0 at poles."""
    if _is_pole(x):
        return -math.inf, 0.0
    if x > 0:
        return -math.lgamma(x), 1.0
    s = _sin_pi(x)
    return math.lgamma(1.0 - x) + math.log(abs(s)) - math.log(math.pi), math.copysign(1.0, s)


def _log_recip_gamma_bound(x: float) -> float:
    """Log of an upper bound of ``|1/Gamma(x)|`` that stays positive at poles."""
    if x > 0:
        return -math.lgamma(x)
    return math.lgamma(1.0 - x) - math.log(math.pi)


def _log_abs(x: float) -> float:
    return math.log(abs(x)) if x != 0 else -math.inf


def _power_term(
    x: float,
    n: int,
    coef: float,
    log_coef: float,
    gamma_args: Sequence[float],
) -> tuple[float, float]:
    """``coef * x**n / prod(Gamma(gamma_args))`` and the log of its magnitude bound.

    ``coef`` must be positive; ``log_coef`` is its logarithm, used when the
    direct product would overflow.
    """
    log_x = _log_abs(x)
    log_pow = n * log_x if n else 0.0
    bound = log_coef + log_pow + sum(_log_recip_gamma_bound(g) for g in gamma_args)
    if n and x == 0:
        return 0.0, -math.inf
    if any(_is_pole(g) for g in gamma_args):
        return 0.0, bound

    if all(g < _GAMMA_MAX_ARG for g in gamma_args) and log_pow < 700 and math.isfinite(coef):
        value = coef * x**n
        for g in gamma_args:
            value *= recip_gamma(g)
        if math.isfinite(value) and value != 0.0:
            return value, bound

    log_mag = log_coef + log_pow
    sign = -1.0 if (x < 0 and n % 2) else 1.0
    for g in gamma_args:
        lg, sg = _log_recip_gamma(g)
        log_mag += lg
        sign *= sg
    if log_mag > 709.0:
        return math.copysign(math.inf, sign), bound
    return sign * math.exp(log_mag), bound


def _sum_series(
    name: str,
    make_terms: Callable[[], Iterator[tuple[float, float]]],
    cfg: SeriesConfig,
    precise: Callable[[int], mpmath.mpf] | None = None,
) -> float:
    """Sum ``(value, log_bound)`` pairs until the tail estimate is below tol.

    With ``rho`` the ratio of consecutive magnitude bounds, the series stops
    once ``rho < 1`` and ``bound * rho / (1 - rho) < tol``; magnitude bounds of
    these series are log-concave past their peak, so the ratio keeps falling.

    If the terms are so much larger than the sum that double rounding would
    exceed about ``100 tol`` (relative to ``max(1, |sum|)``), the sum is
    recomputed with ``precise(k)``, the ``k``-th term in extended precision.
    """
    log_tol = math.log(cfg.tol)
    values: list[float] = []
    peak = -math.inf
    prev_bound = math.inf
    converged = False
    for k, (value, bound) in enumerate(make_terms()):
        values.append(value)
        peak = max(peak, bound)
        if k >= 1:
            if bound == -math.inf:
                converged = True
                break
            log_rho = bound - prev_bound
            if log_rho < 0:
                rho = math.exp(log_rho)
                if bound + log_rho - math.log1p(-rho) < log_tol:
                    converged = True
                    break
        prev_bound = bound
        if len(values) >= cfg.max_terms:
            break

    finite = all(math.isfinite(v) for v in values)
    total = math.fsum(values) if finite else math.nan
    if not converged:
        raise SeriesConvergenceError(name, total, len(values))
    if finite:
        spread = math.fsum(abs(v) for v in values)
        if 2.0 * _EPS * spread <= 100.0 * cfg.tol * max(1.0, abs(total)) or precise is None:
            return total
        log_spread = math.log(spread)
    else:
        if precise is None:
            raise SeriesConvergenceError(name, total, len(values))
        log_spread = peak + math.log(len(values))
    return _sum_precise(precise, len(values), log_spread, cfg)


def _sum_precise(precise: Callable[[int], mpmath.mpf], count: int, log_spread: float, cfg: SeriesConfig) -> float:
    # digits lost to cancellation plus a margin below the tolerance
    digits = int(max(0.0, log_spread) / math.log(10.0)) + int(-math.log10(cfg.tol)) + 10
    with mpmath.workdps(digits):
        total = mpmath.fsum(precise(k) for k in range(count))
        return float(total)


# }}}


# {{{ coefficient generators


def pochhammer(g: float, n: int) -> float:
    """Rising factorial ``(g)_n = g (g + 1) ... (g + n - 1)``."""
    if int(n) != n or n < 0:
        raise DomainError(f"pochhammer index must be a non-negative integer, got {n!r}")
    result = 1.0
    for i in range(int(n)):
        result *= g + i
    return result


def gl_weights(alpha: float, n: int) -> np.ndarray:
    r"""Grünwald-Letnikov weights :math:`\omega_k = (-1)^k \binom{\alpha}{k}`, ``k = 0..n``.

    Computed with :math:`\omega_k = \omega_{k-1} (1 - (\alpha + 1)/k)`.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"gl_weights requires alpha > 0, got {alpha!r}")
    if int(n) != n or n < 0:
        raise DomainError(f"number of weights must be a non-negative integer, got {n!r}")
    w = np.empty(int(n) + 1)
    w[0] = 1.0
    for k in range(1, int(n) + 1):
        w[k] = w[k - 1] * (1.0 - (alpha + 1.0) / k)
    return w


def gl_integral_weights(alpha: float, n: int) -> np.ndarray:
    r"""Weights :math:`\Gamma(k + \alpha) / (\Gamma(\alpha) k!)` of the GL integral."""
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"gl_integral_weights requires alpha > 0, got {alpha!r}")
    w = np.empty(int(n) + 1)
    w[0] = 1.0
    for k in range(1, int(n) + 1):
        w[k] = w[k - 1] * (k - 1.0 + alpha) / k
    return w


# }}}


# {{{ Mittag-Leffler family


def _ml_series_terms(alpha: float, beta: float, x: float) -> Iterator[tuple[float, float]]:
    k = 0
    while True:
        yield _power_term(x, k, 1.0, 0.0, (alpha * k + beta,))
        k += 1


def _ml_precise(alpha: float, beta: float, x: float) -> Callable[[int], mpmath.mpf]:
    def term(k: int) -> mpmath.mpf:
        return mpmath.mpf(x) ** k * mpmath.rgamma(mpmath.mpf(alpha) * k + beta)

    return term


def _ml_algebraic_tail(alpha: float, beta: float, x: float) -> tuple[float, float]:
    """``-sum_{k>=1} x^{-k} / Gamma(beta - alpha k)`` truncated at its smallest term.

    Returns the sum and the smallest term magnitude as an error estimate.
    """
    total = []
    best = math.inf
    for k in range(1, 400):
        t = x ** (-k) * recip_gamma(beta - alpha * k)
        mag = abs(t) if t != 0.0 else abs(x) ** (-k) * math.exp(_log_recip_gamma_bound(beta - alpha * k))
        if mag > best and k > 2:
            break
        best = min(best, mag)
        total.append(-t)
        if mag < 1e-18 * max(1.0, abs(math.fsum(total))):
            break
    return math.fsum(total), best


def _ml_asymptotic(alpha: float, beta: float, x: float) -> tuple[float, float]:
    """Expansion for large negative ``x`` and ``0 < alpha <= 2``, with its error estimate."""
    algebraic, err = _ml_algebraic_tail(alpha, beta, x)
    ax = abs(x)
    if alpha < 1.0:
        return algebraic, err
    # conjugate pair of saddle contributions on the negative axis
    w = ax ** (1.0 / alpha) * cmath.exp(1j * math.pi / alpha)
    weight = 1.0 / alpha if alpha == 1.0 else 2.0 / alpha
    return weight * ((w ** (1.0 - beta)) * cmath.exp(w)).real + algebraic, err


def mittag_leffler(p: MLParams, x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r"""Two-parameter Mittag-Leffler function :math:`E_{\alpha,\beta}(x)`.

    .. math::

        E_{\alpha,\beta}(x) = \sum_{k=0}^\infty \frac{x^k}{\Gamma(\alpha k + \beta)}

    For ``x < 0`` and :math:`0 < \alpha \le 2` the algebraic asymptotic
    expansion (plus the oscillating exponential pair when
    :math:`\alpha \ge 1`) is used whenever its smallest term, the error
    estimate of the optimally truncated expansion, is below ``cfg.tol``.
    Otherwise the power series is summed; when cancellation between its
    terms would cost more than about ``100 tol``, the sum is redone in
    extended precision. ``p.gamma`` is ignored, use :func:`prabhakar_ml` for the
    three-parameter function.

    :raises SeriesConvergenceError: if the series needs more than ``max_terms``.
    """
    alpha, beta, x = float(p.alpha), float(p.beta), float(x)
    if alpha == 0.0:
        if abs(x) >= 1.0:
            raise DomainError(f"E_(0,beta)(x) diverges for |x| >= 1, got x={x!r}")
        return recip_gamma(beta) / (1.0 - x)

    if x < 0 and alpha <= 2.0 and abs(x) ** (1.0 / alpha) > 8.0:
        value, err = _ml_asymptotic(alpha, beta, x)
        if err < cfg.tol:
            return value
    return _sum_series("mittag_leffler", lambda: _ml_series_terms(alpha, beta, x), cfg, _ml_precise(alpha, beta, x))


def mittag_leffler_array(
    p: MLParams, x: np.ndarray | Sequence[float], cfg: SeriesConfig = DEFAULT_SERIES
) -> np.ndarray:
    """Elementwise :func:`mittag_leffler` over an array."""
    x = np.asarray(x, dtype=float)
    out = np.fromiter((mittag_leffler(p, xi, cfg) for xi in x.ravel()), dtype=float, count=x.size)
    return out.reshape(x.shape)


def _prabhakar_terms(alpha: float, beta: float, gamma: float, x: float) -> Iterator[tuple[float, float]]:
    coef = 1.0
    lg0 = math.lgamma(gamma)
    n = 0
    while True:
        # (gamma)_n / n!
        log_coef = math.lgamma(gamma + n) - lg0 - math.lgamma(n + 1.0)
        yield _power_term(x, n, coef, log_coef, (alpha * n + beta,))
        n += 1
        coef *= (gamma + n - 1.0) / n


def prabhakar_ml(p: MLParams, x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r"""Prabhakar function :math:`E^{\gamma}_{\alpha,\beta}(x) = \sum (\gamma)_n x^n / (\Gamma(\alpha n + \beta) n!)`.

    For ``gamma == 1`` this is :func:`mittag_leffler` on the same ``cfg``.
    """
    if p.gamma == 1.0:
        return mittag_leffler(p, x, cfg)
    if not p.alpha > 0:
        raise DomainError(f"prabhakar_ml requires alpha > 0, got {p.alpha!r}")
    alpha, beta, gamma, x = float(p.alpha), float(p.beta), float(p.gamma), float(x)

    def precise(n: int) -> mpmath.mpf:
        return mpmath.rf(gamma, n) / mpmath.factorial(n) * mpmath.mpf(x) ** n * mpmath.rgamma(
            mpmath.mpf(alpha) * n + beta
        )

    return _sum_series("prabhakar_ml", lambda: _prabhakar_terms(alpha, beta, gamma, x), cfg, precise)


def multi_index_ml(m: MultiIndexML, x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r""":math:`\sum_k x^k / \prod_i \Gamma(\mu_i + k/\rho_i)`."""
    x = float(x)

    def terms() -> Iterator[tuple[float, float]]:
        k = 0
        while True:
            yield _power_term(x, k, 1.0, 0.0, tuple(mu + k / rho for rho, mu in zip(m.rhos, m.mus)))
            k += 1

    def precise(k: int) -> mpmath.mpf:
        value = mpmath.mpf(x) ** k
        for rho, mu in zip(m.rhos, m.mus):
            value *= mpmath.rgamma(mu + mpmath.mpf(k) / rho)
        return value

    return _sum_series("multi_index_ml", terms, cfg, precise)


def rabotnov(alpha: float, beta: float, x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r"""Rabotnov fractional exponential.

    .. math::

        \mathcal{E}_\alpha(\beta, x) = x^\alpha \sum_{n=0}^\infty
            \frac{\beta^n x^{n(\alpha+1)}}{\Gamma((n+1)(1+\alpha))}
            = x^\alpha E_{1+\alpha,1+\alpha}(\beta x^{1+\alpha})
    """
    alpha, beta, x = float(alpha), float(beta), float(x)
    if not alpha > -1:
        raise DomainError(f"rabotnov requires alpha > -1, got {alpha!r}")
    if x < 0 and alpha != math.floor(alpha):
        raise DomainError(f"rabotnov needs x >= 0 for non-integer alpha, got x={x!r}")
    if x == 0:
        if alpha > 0:
            return 0.0
        if alpha == 0:
            return 1.0
        raise DomainError("rabotnov is unbounded at x=0 for alpha < 0")
    arg = beta * x ** (1.0 + alpha)
    return x**alpha * mittag_leffler(MLParams(1.0 + alpha, 1.0 + alpha), arg, cfg)


# }}}


# {{{ Wright family


def _wright_terms(lam: float, mu: float, z: float) -> Iterator[tuple[float, float]]:
    n = 0
    while True:
        yield _power_term(z, n, 1.0, 0.0, (n + 1.0, lam * n + mu))
        n += 1


def wright(lam: float, mu: float, z: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r"""Wright function :math:`W_{\lambda,\mu}(z) = \sum z^n / (n! \Gamma(\lambda n + \mu))`, :math:`\lambda > -1`."""
    lam, mu, z = float(lam), float(mu), float(z)
    if not lam > -1:
        raise DomainError(f"wright requires lambda > -1, got {lam!r}")

    def precise(n: int) -> mpmath.mpf:
        return mpmath.mpf(z) ** n / mpmath.factorial(n) * mpmath.rgamma(mpmath.mpf(lam) * n + mu)

    return _sum_series("wright", lambda: _wright_terms(lam, mu, z), cfg, precise)


def wright_auxiliary(nu: float, z: float, which: str = "M", cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    r"""Auxiliary Wright functions.

    ``which="M"``: :math:`M_\nu(z) = \sum_{n\ge0} (-z)^n / (n!\,\Gamma(1 - \nu - \nu n))`,
    ``which="F"``: :math:`F_\nu(z) = \sum_{n\ge1} (-z)^n / (n!\,\Gamma(-\nu n))`,
    for :math:`0 < \nu < 1`. They satisfy :math:`F_\nu(z) = \nu z M_\nu(z)`.
    """
    nu = float(nu)
    if not 0 < nu < 1:
        raise DomainError(f"wright_auxiliary requires 0 < nu < 1, got {nu!r}")
    which = which.upper()
    if which == "M":
        return wright(-nu, 1.0 - nu, -z, cfg)
    if which == "F":
        return wright(-nu, 0.0, -z, cfg)
    raise DomainError(f"which must be 'F' or 'M', got {which!r}")


# }}}
