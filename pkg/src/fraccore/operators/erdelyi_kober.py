r"""Erdélyi-Kober fractional integral and derivative.

.. math::

    I^{\gamma,\mu}_\eta \phi(t) = \frac{\eta\, t^{-\eta(\mu+\gamma)}}{\Gamma(\mu)}
        \int_0^t \tau^{\eta(\gamma+1)-1} (t^\eta - \tau^\eta)^{\mu-1} \phi(\tau)\,d\tau

With :math:`s = t^\eta` and :math:`u = \tau^\eta` this is
:math:`s^{-\mu-\gamma} J^\mu[u^\gamma \phi(u^{1/\eta})](s)`. On a power
function the operator is diagonal,

.. math::

    I^{\gamma,\mu}_\eta t^p = \frac{\Gamma(\gamma + 1 + p/\eta)}{\Gamma(\gamma + 1 + \mu + p/\eta)} t^p,

and in particular maps constants to :math:`\Gamma(\gamma+1)/\Gamma(\gamma+1+\mu)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from fraccore.errors import DomainError, GridError, OrderError
from fraccore.grid import SampledFunction, finite_diff
from fraccore.operators.riemann import _rl_integral_left

__all__ = ["EKParams", "erdelyi_kober"]


@dataclass(frozen=True)
class EKParams:
    gamma: float
    mu: float
    eta: float = 1.0

    def __post_init__(self) -> None:
        if not self.eta > 0:
            raise DomainError(f"Erdelyi-Kober eta must be > 0, got {self.eta!r}")
        if not self.mu >= 0:
            raise OrderError(f"Erdelyi-Kober mu must be >= 0, got {self.mu!r}")


def _betainc_moment(p: float, q: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    r""":math:`\int_{lo}^{hi} v^{p-1} (1 - v)^{q-1} dv` for ``0 <= lo <= hi <= 1``."""
    beta = special.beta(p, q)
    # integrate from the nearer end to keep the difference well conditioned
    upper = lo >= 0.5
    direct = special.betainc(p, q, hi) - special.betainc(p, q, lo)
    mirrored = special.betainc(q, p, 1.0 - lo) - special.betainc(q, p, 1.0 - hi)
    return beta * np.where(upper, mirrored, direct)


def _ek_integral(f: SampledFunction, gamma: float, mu: float, eta: float) -> np.ndarray:
    t = f.grid.nodes
    v = f.values
    if mu == 0.0:
        return v.copy()
    if gamma == 0.0 and eta == 1.0 and f.grid.a == 0.0:
        out = np.empty_like(v)
        out[1:] = t[1:] ** -mu * _rl_integral_left(f, mu).values[1:]
        out[0] = v[0] / math.gamma(1.0 + mu)
        return out
    if not gamma > -1:
        raise DomainError(f"Erdelyi-Kober integral needs gamma > -1 here, got {gamma!r}")

    s = t**eta
    out = np.empty_like(v)
    limit = math.exp(math.lgamma(gamma + 1.0) - math.lgamma(gamma + 1.0 + mu))
    for i in range(t.size):
        if s[i] == 0.0:
            out[i] = limit * v[0]
            continue
        r = s[: i + 1] / s[i]
        # phi is constant on [0, s_0] and linear in u between nodes
        lo, hi = r[:-1], r[1:]
        m0 = _betainc_moment(gamma + 1.0, mu, lo, hi)
        m1 = _betainc_moment(gamma + 2.0, mu, lo, hi)
        width = hi - lo
        to_hi = (m1 - lo * m0) / width
        to_lo = m0 - to_hi
        acc = np.zeros(i + 1)
        acc[:-1] += to_lo
        acc[1:] += to_hi
        head = _betainc_moment(gamma + 1.0, mu, np.zeros(1), r[:1])[0] if r[0] > 0 else 0.0
        acc[0] += head
        out[i] = math.fsum(acc * v[: i + 1]) / math.gamma(mu)
    return out


def erdelyi_kober(f: SampledFunction, p: EKParams, mode: str = "integral") -> SampledFunction:
    r"""Erdélyi-Kober integral or derivative on a grid in :math:`[0, b]`.

    ``mode="integral"`` integrates the linear interpolant of :math:`\phi` in the
    variable :math:`u = \tau^\eta` exactly against the Beta kernel; below the
    first node :math:`\phi` is held at its first value. A node at ``t = 0``
    receives the limit :math:`\Gamma(\gamma+1)/\Gamma(\gamma+1+\mu)\,\phi(0)`.
    With ``gamma = 0``, ``eta = 1`` and a grid starting at 0 this is
    :math:`t^{-\mu} J^\mu \phi` evaluated with :func:`rl_integral`.

    ``mode="derivative"``, :math:`0 < \mu < 1`:

    .. math::

        D^{\gamma,\mu}_\eta \phi = \Big(\gamma + 1 + \frac{t}{\eta}\frac{d}{dt}\Big)
            I^{\gamma+\mu, 1-\mu}_\eta \phi

    and ``mu = 0`` returns ``f`` unchanged.
    """
    if not isinstance(p, EKParams):
        p = EKParams(*p)
    if f.grid.a < 0:
        raise GridError(f"erdelyi_kober needs a grid in [0, b], grid starts at {f.grid.a:g}")
    g, mu, eta = float(p.gamma), float(p.mu), float(p.eta)
    if mode == "integral":
        return f.with_values(_ek_integral(f, g, mu, eta))
    if mode != "derivative":
        raise DomainError(f"mode must be 'integral' or 'derivative', got {mode!r}")
    if mu == 0.0:
        return f.with_values(f.values.copy())
    if not 0 < mu < 1:
        raise OrderError(f"Erdelyi-Kober derivative implemented for 0 < mu < 1, got mu={mu:g}")
    inner = f.with_values(_ek_integral(f, g + mu, 1.0 - mu, eta))
    t = f.grid.nodes
    return f.with_values((g + 1.0) * inner.values + t / eta * finite_diff(inner, 1).values)
