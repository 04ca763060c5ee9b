"""Discrete operators on the fractional basis.

The fractional derivative of order ``sigma = 1 - mu`` maps each weighted
Jacobi mode to a Legendre derivative,

    D^sigma [(1+x)^-mu (P_n^{(mu,-mu)}(x) - P_n^{(mu,-mu)}(-1))] = Gamma(n-mu+1)/n! * P_n'(x),

so the matrix ``d_ij = sum_n Gamma(n-mu+1)/n! c(j,n) P_n'(z_i)`` is exact on the
span of the basis, for any choice of collocation nodes ``z_i``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .grids import Grid, Role
from .jacobi import gamma_ratio, jacobi_all, jacobi_all_deriv, jacobi_at_minus_one

GUARD = 1e-10


class Kind(str, enum.Enum):
    FRAC_DERIV = "frac_deriv"
    SECOND_DERIV = "second_deriv"
    ADV_DIFF = "adv_diff"


@dataclass(frozen=True)
class OperatorMatrix:
    """Row ``i``, column ``j``: the operator applied to ``H_j``, evaluated at ``z_i``."""

    entries: np.ndarray
    kind: Kind
    sigma: float
    rep_grid: Grid
    colloc_grid: Grid
    K: float = 0.0

    def __matmul__(self, values):
        return self.entries @ np.asarray(values, dtype=float)

    @property
    def shape(self):
        return self.entries.shape

    def to_csv(self):
        return "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in self.entries)


def _check_order(basis, sigma):
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")
    if abs(basis.mu + sigma - 1.0) > 1e-12:
        raise ParameterError(f"basis exponent mu={basis.mu} does not match sigma={sigma} (need mu = 1 - sigma)")


def _points(x):
    return np.atleast_1d(np.asarray(x.nodes if isinstance(x, Grid) else x, dtype=float))


def _guard(x):
    if np.any(np.abs(1.0 + x) < GUARD):
        raise DomainError("operators are not evaluated within 1e-10 of x = -1")


def _gamma_weights(mu, N):
    return np.array([gamma_ratio(n, mu) for n in range(1, N + 1)])


def frac_modes(mu, x, N, extra_order=0):
    """``Gamma(n-mu+1)/n! * d^{1+extra_order}/dx P_n(x)`` for ``n = 1..N``.

    ``extra_order = 1`` gives the modes of ``D^{1+sigma} = D D^sigma``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dP = jacobi_all_deriv(N, 0.0, 0.0, x, order=1 + extra_order)[:, 1:]
    return dP * _gamma_weights(mu, N)[None, :]


def weighted_mode_derivs(mu, x, N, k):
    """``d^k/dx^k [(1+x)^-mu (P_n(x) - P_n(-1))]`` for ``n = 1..N``, ``k`` in 0, 1, 2."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if k not in (0, 1, 2):
        raise ParameterError("only derivatives of order 0, 1 and 2 are supported")
    if k > 0:
        _guard(x)
    t = (1.0 + x)[:, None]
    f = jacobi_all(N, mu, -mu, x)[:, 1:] - np.array([jacobi_at_minus_one(n, -mu) for n in range(1, N + 1)])
    w = t ** (-mu)
    if k == 0:
        return w * f
    f1 = jacobi_all_deriv(N, mu, -mu, x, 1)[:, 1:]
    w1 = -mu * t ** (-mu - 1)
    if k == 1:
        return w1 * f + w * f1
    f2 = jacobi_all_deriv(N, mu, -mu, x, 2)[:, 1:]
    w2 = mu * (mu + 1) * t ** (-mu - 2)
    return w2 * f + 2 * w1 * f1 + w * f2


def basis_frac_deriv(basis, j, x, sigma=None):
    """``(D^sigma H_j)(x)``; ``j`` in ``1..N`` or ``None`` for all columns."""
    sigma = 1.0 - basis.mu if sigma is None else sigma
    _check_order(basis, sigma)
    x_arr = _points(x)
    values = frac_modes(basis.mu, x_arr, basis.N) @ basis.coeffs.T
    return _select(values, j, x)


def basis_composed_deriv(basis, j, x):
    """``(D^{1+sigma} H_j)(x) = d/dx (D^sigma H_j)(x)`` with ``sigma = 1 - mu``."""
    values = frac_modes(basis.mu, _points(x), basis.N, extra_order=1) @ basis.coeffs.T
    return _select(values, j, x)


def basis_integer_deriv(basis, j, x, k):
    """``(D^k H_j)(x)`` for ``k`` in 1, 2, through exact Jacobi derivatives."""
    if k not in (1, 2):
        raise ParameterError("k must be 1 or 2")
    values = weighted_mode_derivs(basis.mu, _points(x), basis.N, k) @ basis.coeffs.T
    return _select(values, j, x)


def _select(values, j, x):
    if j is None:
        return values
    col = values[:, j - 1]
    return float(col[0]) if np.ndim(x) == 0 and not isinstance(x, Grid) else col


def _colloc_grid(colloc):
    if isinstance(colloc, Grid):
        return colloc.as_role(Role.COLLOCATION)
    return Grid(colloc, role=Role.COLLOCATION)


def _columns(basis, boundary):
    return basis.N - 1 if boundary else basis.N


def frac_diff_matrix(basis, colloc, sigma):
    """Square matrix of ``D^sigma`` on the basis, rows at the collocation nodes."""
    _check_order(basis, sigma)
    colloc = _colloc_grid(colloc)
    z = colloc.nodes
    if z.size != basis.N:
        raise ParameterError(f"need {basis.N} collocation nodes, got {z.size}")
    _guard(z)
    entries = frac_modes(basis.mu, z, basis.N) @ basis.coeffs.T
    return OperatorMatrix(entries, Kind.FRAC_DERIV, sigma, basis.rep_grid, colloc)


def second_deriv_matrix(basis, colloc, boundary=False):
    """``D^2`` on ``H_1..H_N`` (or ``H_1..H_{N-1}`` when ``boundary``)."""
    colloc = _colloc_grid(colloc)
    z = colloc.nodes
    ncol = _columns(basis, boundary)
    if z.size != ncol:
        raise ParameterError(f"need {ncol} collocation nodes, got {z.size}")
    _guard(z)
    entries = (weighted_mode_derivs(basis.mu, z, basis.N, 2) @ basis.coeffs.T)[:, :ncol]
    return OperatorMatrix(entries, Kind.SECOND_DERIV, 1.0 - basis.mu, basis.rep_grid, colloc)


def advdiff_matrix(basis, colloc, sigma, K, boundary=True):
    """Matrix of ``-D^2 + K D^sigma``.

    With ``boundary`` (the default) the last basis function is dropped, so the
    discrete solution vanishes at both endpoints and the system is
    ``(N-1) x (N-1)``.
    """
    _check_order(basis, sigma)
    colloc = _colloc_grid(colloc)
    z = colloc.nodes
    ncol = _columns(basis, boundary)
    if z.size != ncol:
        raise ParameterError(f"need {ncol} collocation nodes, got {z.size}")
    _guard(z)
    if boundary and np.any(np.abs(1.0 - z) < GUARD):
        raise DomainError("collocation nodes of the boundary-value operator must avoid x = 1")
    mu = basis.mu
    modes = -weighted_mode_derivs(mu, z, basis.N, 2) + K * frac_modes(mu, z, basis.N)
    entries = (modes @ basis.coeffs.T)[:, :ncol]
    return OperatorMatrix(entries, Kind.ADV_DIFF, sigma, basis.rep_grid, colloc, K=float(K))
