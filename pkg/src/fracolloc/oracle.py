"""Reference Riemann-Liouville derivatives used to validate the library.

Three independent routes:

* ``rl_monomial``: the power rule for ``(1+x)^p``,
* ``rl_weighted_jacobi``: the closed-form image of a weighted ``(mu, -mu)``
  Jacobi mode, evaluated with ``numpy.polynomial.legendre``,
* ``rl_quadrature``: brute force, the weakly singular integral by adaptive
  quadrature and the outer derivative by Richardson-extrapolated differences.

Nothing here touches :mod:`fracolloc.operators`.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import integrate

from .errors import DomainError, ParameterError, ToleranceError

MAX_LEVELS = 20


class Method(str, enum.Enum):
    ANALYTIC_MONOMIAL = "analytic_monomial"
    ASKEY_CLOSED_FORM = "askey_closed_form"
    SINGULAR_QUADRATURE = "singular_quadrature"


@dataclass(frozen=True)
class OracleResult:
    value: float
    method: Method
    est_error: float = 0.0

    def __float__(self):
        return float(self.value)


def _check_sigma(sigma):
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")


def rl_monomial(p, sigma, x):
    """``D^sigma (1+x)^p = Gamma(p+1) / Gamma(p+1-sigma) (1+x)^(p-sigma)``."""
    if p <= -1:
        raise DomainError(f"(1+x)^p is not integrable at -1 for p={p}")
    _check_sigma(sigma)
    if not -1.0 < x <= 1.0:
        raise DomainError(f"x must lie in (-1, 1], got {x}")
    q = p + 1 - sigma
    # 1/Gamma vanishes at the poles: D^sigma (1+x)^(sigma-1) = 0
    coef = 0.0 if q <= 0 and float(q).is_integer() else math.gamma(p + 1) / math.gamma(q)
    return OracleResult(coef * (1.0 + x) ** (p - sigma), Method.ANALYTIC_MONOMIAL)


def jacobi_power_coeffs(n, alpha, beta):
    """Coefficients ``e_m`` with ``P_n^{(alpha,beta)}(x) = sum_m e_m (1+x)^m``.

    From the hypergeometric form of ``P_n^{(beta,alpha)}`` at ``-x``.
    """
    out = np.empty(n + 1)
    lead = math.lgamma(beta + n + 1) - math.lgamma(n + 1) - math.lgamma(alpha + beta + n + 1)
    for m in range(n + 1):
        log_mag = (
            lead
            + math.lgamma(n + 1)
            - math.lgamma(m + 1)
            - math.lgamma(n - m + 1)
            + math.lgamma(alpha + beta + n + m + 1)
            - math.lgamma(beta + m + 1)
            - m * math.log(2.0)
        )
        out[m] = (-1.0) ** (n + m) * math.exp(log_mag)
    return out


def rl_weighted_jacobi_by_monomials(n, mu, x):
    """Image of the weighted mode through the power rule, term by term.

    ``(1+x)^-mu (P_n(x) - P_n(-1)) = sum_{m>=1} e_m (1+x)^(m-mu)``.
    """
    sigma = 1.0 - mu
    e = jacobi_power_coeffs(n, mu, -mu)
    value = sum(e[m] * rl_monomial(m - mu, sigma, x).value for m in range(1, n + 1))
    return OracleResult(float(value), Method.ANALYTIC_MONOMIAL)


def rl_weighted_jacobi(n, mu, x):
    """``D^(1-mu) [(1+x)^-mu (P_n(x) - P_n(-1))] = Gamma(n-mu+1)/n! P_n'(x)`` (Legendre ``P_n'``)."""
    if not 0.0 < mu < 1.0:
        raise ParameterError(f"mu must lie in (0, 1), got {mu}")
    if n == 0:
        return OracleResult(0.0, Method.ASKEY_CLOSED_FORM)
    coef = math.exp(math.lgamma(n - mu + 1) - math.lgamma(n + 1))
    dP = npleg.legval(x, npleg.legder([0.0] * n + [1.0]))
    return OracleResult(float(coef * dP), Method.ASKEY_CLOSED_FORM)


def weighted_jacobi_function(n, mu):
    """``x -> (1+x)^-mu (P_n(x) - P_n(-1))`` evaluated through the power expansion."""
    e = jacobi_power_coeffs(n, mu, -mu)

    def f(x):
        t = 1.0 + np.asarray(x, dtype=float)
        return sum(e[m] * t ** (m - mu) for m in range(1, n + 1)) if n > 0 else 0.0 * t

    return f


def rl_integral(f, sigma, y):
    """``int_{-1}^{y} f(s) (y-s)^-sigma ds`` with ``s = y - t^(1/(1-sigma))``."""
    if y <= -1.0:
        return 0.0, 0.0
    power = 1.0 / (1.0 - sigma)
    upper = (y + 1.0) ** (1.0 - sigma)
    with warnings.catch_warnings():
        # quad flags roundoff once it reaches machine precision; the Richardson loop judges accuracy
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            lambda t: f(max(y - t**power, -1.0)), 0.0, upper, epsabs=1e-15, epsrel=1e-13, limit=400
        )
    return value / (1.0 - sigma), err / (1.0 - sigma)


def rl_quadrature(f, sigma, x, tol=1e-9, h0=None, max_levels=MAX_LEVELS):
    """Brute-force ``D^sigma f(x)`` for a scalar function ``f``.

    The outer derivative is a 5-point central difference, extrapolated once
    (Richardson, ``h`` and ``h/2``); ``h`` is halved until two successive
    extrapolated values agree to ``tol`` relative.
    """
    _check_sigma(sigma)
    if not -1.0 + 1e-4 <= x < 1.0:
        raise DomainError(f"x must lie in [-1 + 1e-4, 1), got {x}")
    h = min(0.05, 0.25 * (1.0 + x)) if h0 is None else h0

    def central(step):
        vals = [rl_integral(f, sigma, x + k * step)[0] for k in (-2, -1, 1, 2)]
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * step)

    scale = 1.0 / math.gamma(1.0 - sigma)
    coarse = central(h)
    previous = None
    best = None
    for _ in range(max_levels):
        fine = central(h / 2)
        value = (16 * fine - coarse) / 15
        if previous is not None:
            est = abs(value - previous)
            if best is None or est < best[1]:
                best = (value, est)
            if est <= tol * max(1.0, abs(value)):
                return OracleResult(scale * value, Method.SINGULAR_QUADRATURE, scale * est)
        previous, coarse, h = value, fine, h / 2
    raise ToleranceError(
        f"RL quadrature did not converge at x={x} after {max_levels} levels",
        best=OracleResult(scale * best[0], Method.SINGULAR_QUADRATURE, scale * best[1]),
    )
