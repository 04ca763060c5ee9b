"""Jacobi polynomials, their derivatives and the gamma-function helpers.

Everything here is evaluated with the forward three-term recurrence

    P_0 = 1,  P_1 = ((a + b + 2) x + (a - b)) / 2,
    P_n = (a_n x + b_n) P_{n-1} + c_n P_{n-2},   n >= 2,

and vectorised over ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

#: Parameter range accepted by :class:`JacobiParams`.
PARAM_MAX = 3.0


def _check_params(alpha, beta):
    if not (alpha > -1.0 and beta > -1.0):
        raise ParameterError(f"Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}")


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ParameterError(f"degree must be a nonnegative integer, got {n}")


@dataclass(frozen=True)
class JacobiParams:
    """One member ``P_n^{(alpha, beta)}`` of a Jacobi family."""

    n: int
    alpha: float
    beta: float

    def __post_init__(self):
        _check_degree(self.n)
        _check_params(self.alpha, self.beta)
        if self.alpha > PARAM_MAX or self.beta > PARAM_MAX:
            raise ParameterError(
                f"alpha, beta are restricted to (-1, {PARAM_MAX}], got ({self.alpha}, {self.beta})"
            )

    def __call__(self, x):
        return jacobi_eval(self.n, self.alpha, self.beta, x)

    def deriv(self, x, order=1):
        return jacobi_deriv(self.n, self.alpha, self.beta, x, order)

    def at_minus_one(self):
        return jacobi_at_minus_one(self.n, self.beta)

    def norm_sq(self):
        return jacobi_norm_sq(self.n, self.alpha, self.beta)


def recurrence_coeffs(n, alpha, beta):
    """Return ``(a_n, b_n, c_n)`` of the three-term recurrence, ``n >= 2``."""
    if n < 2:
        raise ParameterError("recurrence coefficients are defined for n >= 2")
    s = alpha + beta
    a = (2 * n + s) * (2 * n + s - 1) / (2 * n * (n + s))
    b = (alpha**2 - beta**2) * (2 * n + s - 1) / (2 * n * (n + s) * (2 * n + s - 2))
    c = -(n + alpha - 1) * (n + beta - 1) * (2 * n + s) / (n * (n + s) * (2 * n + s - 2))
    return a, b, c


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def jacobi_eval(n, alpha, beta, x):
    """Evaluate ``P_n^{(alpha, beta)}(x)`` by forward recurrence."""
    _check_degree(n)
    _check_params(alpha, beta)
    x, scalar = _as_array(x)
    p_prev = np.ones_like(x)
    if n == 0:
        return float(p_prev) if scalar else p_prev
    p = 0.5 * (alpha + beta + 2) * x + 0.5 * (alpha - beta)
    for k in range(2, n + 1):
        a, b, c = recurrence_coeffs(k, alpha, beta)
        p, p_prev = (a * x + b) * p + c * p_prev, p
    return float(p) if scalar else p


def jacobi_all(n_max, alpha, beta, x):
    """Values of ``P_0 .. P_{n_max}`` at ``x``; shape ``(len(x), n_max + 1)``."""
    _check_params(alpha, beta)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, n_max + 1))
    out[:, 0] = 1.0
    if n_max >= 1:
        out[:, 1] = 0.5 * (alpha + beta + 2) * x + 0.5 * (alpha - beta)
    for k in range(2, n_max + 1):
        a, b, c = recurrence_coeffs(k, alpha, beta)
        out[:, k] = (a * x + b) * out[:, k - 1] + c * out[:, k - 2]
    return out


def deriv_factor(n, alpha, beta, order):
    """Constant ``K`` with ``d^order/dx^order P_n^{(a,b)} = K P_{n-order}^{(a+order, b+order)}``."""
    factor = 1.0
    for i in range(order):
        factor *= 0.5 * (n + alpha + beta + 1 + i)
    return factor


def jacobi_deriv(n, alpha, beta, x, order=1):
    """Derivative of order ``order`` of ``P_n^{(alpha, beta)}`` at ``x``."""
    _check_degree(n)
    _check_params(alpha, beta)
    if order < 0:
        raise ParameterError("derivative order must be nonnegative")
    if n < order:
        x, scalar = _as_array(x)
        return 0.0 if scalar else np.zeros_like(x)
    return deriv_factor(n, alpha, beta, order) * jacobi_eval(n - order, alpha + order, beta + order, x)


def jacobi_all_deriv(n_max, alpha, beta, x, order=1):
    """Derivatives of ``P_0 .. P_{n_max}``; shape ``(len(x), n_max + 1)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((x.size, n_max + 1))
    if n_max < order:
        return out
    shifted = jacobi_all(n_max - order, alpha + order, beta + order, x)
    for n in range(order, n_max + 1):
        out[:, n] = deriv_factor(n, alpha, beta, order) * shifted[:, n - order]
    return out


def binomial_ratio(n, beta):
    """``Gamma(n + beta + 1) / (n! Gamma(beta + 1))`` as a product, no overflow."""
    value = 1.0
    for k in range(1, n + 1):
        value *= (k + beta) / k
    return value


def jacobi_at_minus_one(n, beta):
    """``P_n^{(alpha, beta)}(-1) = (-1)^n Gamma(n+beta+1) / (n! Gamma(beta+1))``."""
    _check_degree(n)
    return (-1.0) ** n * binomial_ratio(n, beta)


def jacobi_norm_sq(n, alpha, beta):
    """Squared weighted L2 norm of ``P_n^{(alpha, beta)}`` on [-1, 1].

    For ``n = 0`` the closed form is singular when ``alpha + beta = -1``, so the
    Beta-function moment ``2^{a+b+1} B(a+1, b+1)`` is used instead.
    """
    _check_degree(n)
    _check_params(alpha, beta)
    s = alpha + beta
    if n == 0:
        return math.exp(
            (s + 1) * math.log(2.0) + math.lgamma(alpha + 1) + math.lgamma(beta + 1) - math.lgamma(s + 2)
        )
    log_value = (
        (s + 1) * math.log(2.0)
        + math.lgamma(n + alpha + 1)
        + math.lgamma(n + beta + 1)
        - math.lgamma(n + 1)
        - math.log(2 * n + s + 1)
        - math.lgamma(n + s + 1)
    )
    return math.exp(log_value)


def gamma_fn(x):
    """Euler gamma function with an explicit error at the poles."""
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"gamma has a pole at {x}")
    return math.gamma(x)


def gamma_ratio(n, mu):
    """``Gamma(n - mu + 1) / n!`` computed as ``Gamma(1 - mu) prod_k (k - mu) / k``."""
    _check_degree(n)
    value = gamma_fn(1.0 - mu)
    for k in range(1, n + 1):
        value *= (k - mu) / k
    return value


def legendre(n, x):
    return jacobi_eval(n, 0.0, 0.0, x)


def legendre_deriv(n, x, order=1):
    return jacobi_deriv(n, 0.0, 0.0, x, order)
