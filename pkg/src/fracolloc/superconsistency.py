"""Superconsistent collocation nodes.

Given a representation grid made of the zeros of

    chi_N(x) = (1+x)^beta (1-x) P_{N-1}^{(alpha,beta)}(x),

``chi_N`` is invisible to the discrete operator (all its nodal values are
zero).  Collocating at the zeros of the exact image ``Psi_N = D^sigma chi_N``
(or of ``-chi_N'' + K Psi_N`` for the advection-diffusion operator) puts
``chi_N`` in the kernel of the consistency error as well.

Three families are supported:

``cheb``  alpha = beta = 1/2, grid = Chebyshev-Gauss-Lobatto nodes
``leg``   alpha = beta = 1, grid = Legendre-Gauss-Lobatto nodes
``mu``    alpha = 1+mu, beta = 1-mu, grid = zeros of d/dx P_N^{(mu,-mu)} and +-1
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, DomainError, InterlacingError, ParameterError
from .grids import Grid, Role, chebyshev_lobatto, jacobi_mu_lobatto, legendre_lobatto, legendre_zeros
from .jacobi import gamma_fn, jacobi_deriv, jacobi_eval, legendre, legendre_deriv, recurrence_coeffs

ROOT_TOL = 1e-13
SCAN_PANELS = 2000
EDGE_TOL = 1e-13


class Family(str, enum.Enum):
    CHEB = "cheb"
    LEG = "leg"
    MU = "mu"


def _family_params(family, mu):
    family = Family(family)
    if family is Family.CHEB:
        return 0.5, 0.5
    if family is Family.LEG:
        return 1.0, 1.0
    return 1.0 + mu, 1.0 - mu


def _check(N, mu):
    if int(N) != N or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N}")
    if not 0.0 <= mu <= 1.0:
        raise ParameterError(f"mu must lie in [0, 1], got {mu}")


@dataclass(frozen=True)
class ChiFunction:
    """``chi_N`` for one family, stored as a three-term Jacobi combination."""

    family: Family
    N: int
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        _check(self.N, self.mu)

    @property
    def params(self):
        return _family_params(self.family, self.mu)

    @property
    def scale(self):
        # d/dx P_N^{(mu,-mu)} = (N+1)/2 P_{N-1}^{(1+mu,1-mu)}
        return 0.5 * (self.N + 1) if self.family is Family.MU else 1.0

    @property
    def terms(self):
        """``[(coefficient, degree)]`` so that ``(1-x) P_{N-1} = sum coef * P_degree``."""
        alpha, beta = self.params
        a, b, c = recurrence_coeffs(self.N, alpha, beta)
        return [(1.0 + b / a, self.N - 1), (-1.0 / a, self.N), (c / a, self.N - 2)]

    def __call__(self, x):
        alpha, beta = self.params
        x = np.asarray(x, dtype=float)
        poly = sum(coef * jacobi_eval(k, alpha, beta, x) for coef, k in self.terms)
        return self.scale * np.clip(1.0 + x, 0.0, None) ** beta * poly

    def direct(self, x):
        """``scale * (1+x)^beta (1-x) P_{N-1}^{(alpha,beta)}(x)`` without the expansion."""
        alpha, beta = self.params
        x = np.asarray(x, dtype=float)
        return self.scale * np.clip(1.0 + x, 0.0, None) ** beta * (1 - x) * jacobi_eval(self.N - 1, alpha, beta, x)

    def second_deriv(self, x):
        """``chi_N''`` by the product rule with exact Jacobi derivatives."""
        alpha, beta = self.params
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(1.0 + x) < 1e-10):
            raise DomainError("chi'' is not evaluated within 1e-10 of x = -1")
        n = self.N - 1
        P = jacobi_eval(n, alpha, beta, x)
        P1 = jacobi_deriv(n, alpha, beta, x, 1)
        P2 = jacobi_deriv(n, alpha, beta, x, 2)
        q = (1 - x) * P
        q1 = -P + (1 - x) * P1
        q2 = -2 * P1 + (1 - x) * P2
        t = 1.0 + x
        return self.scale * (beta * (beta - 1) * t ** (beta - 2) * q + 2 * beta * t ** (beta - 1) * q1 + t**beta * q2)

    def representation_grid(self):
        if self.family is Family.CHEB:
            return chebyshev_lobatto(self.N)
        if self.family is Family.LEG:
            return legendre_lobatto(self.N)
        return jacobi_mu_lobatto(self.N, self.mu)


@dataclass(frozen=True)
class PsiFunction:
    """``Psi_N = D^sigma chi_N`` with ``sigma = 1 - mu``.

    Each term ``(1+x)^beta P_k^{(alpha,beta)}`` of ``chi_N`` is mapped to
    ``d/dx [r_k (1+x)^{beta+mu} P_k^{(alpha-mu, beta+mu)}]`` with
    ``r_k = Gamma(k+beta+1) / Gamma(k+beta+mu+1)``; the outer derivative is
    taken by the product rule.  ``Psi_N = (1+x)^{beta+mu-1} R(x)`` where ``R``
    is a polynomial of degree ``N`` (``reduced``).
    """

    family: Family
    N: int
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        _check(self.N, self.mu)

    @property
    def chi(self):
        return ChiFunction(self.family, self.N, self.mu)

    def _shifted_terms(self):
        alpha, beta = self.chi.params
        mu = self.mu
        out = []
        for coef, k in self.chi.terms:
            r = math.exp(math.lgamma(k + beta + 1) - math.lgamma(k + beta + mu + 1))
            out.append((coef * r, k))
        return out, (alpha - mu, beta + mu)

    def reduced(self, x):
        """Polynomial part ``R(x) = e S(x) + (1+x) S'(x)``, ``e = beta + mu``."""
        if self.family is Family.MU:
            return self.legendre_form(x)
        return self._askey_reduced(x)

    def _askey_reduced(self, x):
        x = np.asarray(x, dtype=float)
        terms, (a, b) = self._shifted_terms()
        scale = self.chi.scale
        S = scale * sum(c * jacobi_eval(k, a, b, x) for c, k in terms)
        dS = scale * sum(c * jacobi_deriv(k, a, b, x) for c, k in terms)
        return b * S + (1.0 + x) * dS

    def askey_form(self, x):
        """``Psi_N`` through the generic Jacobi-image route (all families)."""
        x = np.asarray(x, dtype=float)
        e = self._shifted_terms()[1][1]
        # singular at x = -1 when e < 1; the value there is reported as inf
        with np.errstate(divide="ignore"):
            return np.clip(1.0 + x, 0.0, None) ** (e - 1.0) * self._askey_reduced(x)

    def legendre_form(self, x):
        """Mu family only: ``(N+1) G(N-mu)/N! * d/dx {(1+x) Q'(x)}`` with Legendre ``Q``."""
        if self.family is not Family.MU:
            raise ParameterError("the Legendre form exists only for the mu family")
        N, mu = self.N, self.mu
        alpha, beta = self.chi.params
        a, b, c = recurrence_coeffs(N, alpha, beta)
        coeffs = {
            N: (1 + b / a) * (N - mu) / (N + 1),
            N + 1: -(1 / a) * (N + 1 - mu) * (N - mu) / ((N + 2) * (N + 1)),
            N - 1: c / a,
        }
        x = np.asarray(x, dtype=float)
        dQ = sum(v * legendre_deriv(k, x, 1) for k, v in coeffs.items())
        d2Q = sum(v * legendre_deriv(k, x, 2) for k, v in coeffs.items())
        pref = psi_approx_constant(N, mu)
        return pref * (dQ + (1.0 + x) * d2Q)

    def __call__(self, x):
        if self.family is Family.MU:
            return self.legendre_form(x)
        return self.askey_form(x)


def bisect_all(f, a, b, fa=None, tol=ROOT_TOL, maxiter=200):
    """Bisection on many sign-change brackets at once; ``f`` must be vectorised."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    if a.size == 0:
        return a
    fa = f(a) if fa is None else np.array(fa, dtype=float)
    for _ in range(maxiter):
        if np.max(b - a) <= tol:
            break
        m = 0.5 * (a + b)
        fm = f(m)
        left = np.signbit(fm) == np.signbit(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    return 0.5 * (a + b)


def chi_eval(chi, x):
    return chi(x)


def psi_eval(psi, x):
    return psi(x)


def psi_approx_constant(N, mu):
    """Multiplying constant ``(N+1) Gamma(N-mu) / N!`` of the large-N approximation."""
    gamma_fn(N - mu)  # pole check
    return (N + 1) * math.exp(math.lgamma(N - mu) - math.lgamma(N + 1))


def psi_approx_eval(N, mu, x):
    """Large-N approximation ``-(N+1)G(N-mu)/N! [(1+x) P_N' + (N^2+N+1) P_N]`` (mu family)."""
    x = np.asarray(x, dtype=float)
    return -psi_approx_constant(N, mu) * ((1.0 + x) * legendre_deriv(N, x) + (N * N + N + 1) * legendre(N, x))


def chi_second_deriv(N, mu, x):
    """Closed-form second derivative of the mu-family ``chi_N``.

    Uses ``d/dx[(1-x^2) P'] = 2 mu P' - N(N+1) P`` for ``P = P_N^{(mu,-mu)}``.
    """
    _check(N, mu)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(1.0 + x) < 1e-10):
        raise DomainError("chi'' is not evaluated within 1e-10 of x = -1")
    P = jacobi_eval(N, mu, -mu, x)
    dP = jacobi_deriv(N, mu, -mu, x, 1)
    d2P = jacobi_deriv(N, mu, -mu, x, 2)
    t = 1.0 + x
    lam = N * (N + 1)
    return (
        t ** (-mu - 2) * (mu * (mu + 1) * (1 - x * x) - 4 * mu * mu * t - lam * t * t) * dP
        + 2 * mu * lam * t ** (-mu - 1) * P
        + 2 * mu * t ** (-mu) * d2P
    )


def superconsistent_nodes(family, N, sigma, tol=ROOT_TOL):
    """The ``N`` zeros of ``Psi_N``, one per Legendre-zero bracket.

    Brackets are ``[-1, z_1], [z_1, z_2], ..., [z_N, 1]`` with ``z_k`` the
    zeros of ``P_N``; exactly ``N`` of these ``N + 1`` brackets must show a
    sign change.  In the limits ``sigma = 1`` (``Psi ~ P_N``) and ``sigma = 0``
    (``Psi = chi``, zero at ``x = 1``) zeros sit on bracket edges; an edge
    where ``R`` vanishes to rounding is taken as a zero.
    """
    mu = 1.0 - sigma
    psi = PsiFunction(family, N, mu)
    # R has degree N, so interpolation at N+1 Chebyshev points reproduces it to rounding
    reduced = np.polynomial.Chebyshev.interpolate(psi.reduced, N)
    edges = np.concatenate([[-1.0], legendre_zeros(N).nodes, [1.0]])
    values = reduced(edges)
    on_edge = np.abs(values) <= EDGE_TOL * np.sum(np.abs(reduced.coef))
    values = np.where(on_edge, 0.0, values)
    changes = [i for i in range(N + 1) if values[i] * values[i + 1] < 0]
    if len(changes) + np.count_nonzero(on_edge) != N:
        silent = [(edges[i], edges[i + 1]) for i in range(N + 1) if i not in changes]
        raise InterlacingError(
            f"Psi_N ({Family(family).value}, N={N}, mu={mu:g}) changes sign in {len(changes)} "
            f"of {N + 1} Legendre brackets, expected {N}; silent brackets: {silent}",
            brackets=silent,
        )
    idx = np.array(changes, dtype=int)
    roots = bisect_all(reduced, edges[idx], edges[idx + 1], values[idx], tol=tol)
    return Grid(
        np.sort(np.concatenate([edges[on_edge], roots])),
        role=Role.COLLOCATION,
        family="psi_zeros",
        params={"family": Family(family).value, "N": N, "sigma": sigma},
    )


def mixed_condition(family, N, mu, K):
    """``z -> -chi_N''(z) + K Psi_N(z)``."""
    family = Family(family)
    psi = PsiFunction(family, N, mu)
    if family is Family.MU:
        return lambda z: -chi_second_deriv(N, mu, z) + K * psi(z)
    chi = psi.chi
    return lambda z: -chi.second_deriv(z) + K * psi(z)


def mixed_collocation_nodes(family, N, sigma, K, panels=SCAN_PANELS, tol=ROOT_TOL):
    """The ``N - 1`` roots of ``-chi_N'' + K Psi_N`` in (-1, 1).

    A uniform sign scan locates the roots and bisection refines them.  Any
    other root count raises :class:`BlowUpError` carrying the scan trace.
    """
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")
    mu = 1.0 - sigma
    f = mixed_condition(family, N, mu, K)
    mesh = np.linspace(-1.0, 1.0, panels + 1)[1:-1]
    values = f(mesh)
    trace = [(mesh[i], mesh[i + 1]) for i in np.nonzero(values[:-1] * values[1:] < 0)[0]]
    exact = list(mesh[values == 0.0])
    if len(trace) + len(exact) != N - 1:
        raise BlowUpError(
            f"-chi'' + K Psi ({Family(family).value}, N={N}, sigma={sigma:g}, K={K:g}) has "
            f"{len(trace) + len(exact)} sign changes on {panels} panels, expected {N - 1}",
            trace=trace,
        )
    idx = np.nonzero(values[:-1] * values[1:] < 0)[0]
    roots = np.concatenate([exact, bisect_all(f, mesh[idx], mesh[idx + 1], values[idx], tol=tol)])
    return Grid(
        np.sort(roots),
        role=Role.COLLOCATION,
        family="mixed_zeros",
        params={"family": Family(family).value, "N": N, "sigma": sigma, "K": K},
    )
