"""Fractional Lagrange basis on a representation grid.

The basis functions

    H_j(x) = ((1+x)/(1+x_j))^(1-mu) * prod_{k=1..N, k!=j} (x - x_k)/(x_j - x_k)

satisfy ``H_j(x_m) = delta_jm`` and vanish at ``x = -1``. They are also written
in the weighted Jacobi form

    H_j(x) = (1+x)^-mu * sum_{n=1..N} c(j, n) [P_n(x) - P_n(-1)],  P_n = P_n^{(mu,-mu)},

and the coefficient matrix ``c`` is what the operator assembly consumes.
"""
from __future__ import annotations

from dataclasses import dataclass

import warnings

import numpy as np
import scipy.linalg

from .errors import DomainError, ParameterError, SingularMatrixError
from .grids import Grid, QuadratureRule
from .jacobi import jacobi_all, jacobi_at_minus_one, jacobi_norm_sq

PIVOT_TOL = 1e-300


def _check_mu(mu):
    if not 0.0 < mu < 1.0:
        raise ParameterError(f"mu must lie in (0, 1), got {mu}")


def _nodes_right_of_minus_one(grid):
    x = grid.drop_left().nodes if isinstance(grid, Grid) else np.asarray(grid, dtype=float)
    if np.any(x <= -1.0):
        raise DomainError("representation nodes x_1..x_N must be greater than -1")
    return x


def weighted_modes(mu, x, N):
    """Matrix ``(1+x_i)^-mu [P_n(x_i) - P_n(-1)]`` for ``n = 1..N``; shape ``(len(x), N)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    P = jacobi_all(N, mu, -mu, x)[:, 1:]
    p_left = np.array([jacobi_at_minus_one(n, -mu) for n in range(1, N + 1)])
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 + x)[:, None] ** (-mu) * (P - p_left)
    out[x == -1.0, :] = 0.0
    return out


@dataclass(frozen=True)
class BasisChangeMatrix:
    """``a_{j,n} = (x_j+1)^-mu [P_n(x_j) - P_n(-1)]``, rows indexed by node."""

    entries: np.ndarray
    mu: float
    grid: Grid

    @property
    def N(self):
        return self.entries.shape[0]


def assemble_A(grid, mu):
    """Basis-change matrix on the nodes of ``grid`` that lie right of -1."""
    _check_mu(mu)
    x = _nodes_right_of_minus_one(grid)
    if not isinstance(grid, Grid):
        grid = Grid(x)
    return BasisChangeMatrix(weighted_modes(mu, x, x.size), mu, grid)


def coefficients_by_solve(A):
    """Coefficients ``c[j-1, n-1] = c(j, n)``, i.e. the transpose of ``A^-1``.

    Row ``j`` of the result expands ``H_j``; ``A @ c.T`` is the identity.
    """
    entries = A.entries if isinstance(A, BasisChangeMatrix) else np.asarray(A, dtype=float)
    with warnings.catch_warnings():
        # exact singularity is reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(entries, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL:
        raise SingularMatrixError("basis-change matrix is singular")
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(entries.shape[0]))
    return inv.T


def coefficients_explicit(N, mu, rule):
    """Closed-form coefficients on the ``(mu, -mu)`` Gauss-Lobatto grid.

    ``c(j, k) = (x_j+1)^mu P_k(x_j) w_j / ||P_k||^2`` for ``k < N`` and the
    discrete norm ``sum_m P_N(x_m)^2 w_m`` replaces ``||P_N||^2`` for ``k = N``.
    """
    _check_mu(mu)
    grid = rule.nodes
    if grid.family != "jacobi_mu_lobatto" or len(grid) != N + 1 or not np.isclose(
        grid.params.get("alpha", np.nan), mu
    ):
        raise ParameterError("explicit coefficients need the (mu, -mu) Gauss-Lobatto grid of matching N and mu")
    x_all = grid.nodes
    w = rule.weights
    P_all = jacobi_all(N, mu, -mu, x_all)
    x = x_all[1:]
    P = P_all[1:, :]
    norms = np.array([jacobi_norm_sq(k, mu, -mu) for k in range(1, N)] + [np.sum(P_all[:, N] ** 2 * w)])
    scale = (1.0 + x) ** mu * w[1:]
    return scale[:, None] * P[:, 1:] / norms[None, :]


def condition_number_2(A):
    """Spectral condition number from the singular values."""
    entries = A.entries if isinstance(A, BasisChangeMatrix) else np.asarray(A, dtype=float)
    s = np.linalg.svd(entries, compute_uv=False)
    if s[-1] == 0.0 or not np.isfinite(s[-1]):
        raise SingularMatrixError("matrix is singular")
    return float(s[0] / s[-1])


@dataclass(frozen=True)
class FracBasis:
    """Fractional Lagrange basis ``H_1 .. H_N`` with its cached coefficients."""

    rep_grid: Grid
    mu: float
    coeffs: np.ndarray

    @classmethod
    def build(cls, grid, mu, method="solve", rule=None):
        _check_mu(mu)
        if not isinstance(grid, Grid):
            grid = Grid(grid)
        if method == "solve":
            coeffs = coefficients_by_solve(assemble_A(grid, mu))
        elif method == "explicit":
            N = len(grid.drop_left())
            if rule is None:
                from .grids import gauss_lobatto_weights

                rule = gauss_lobatto_weights(N, mu, grid=grid)
            coeffs = coefficients_explicit(N, mu, rule)
        else:
            raise ParameterError(f"unknown coefficient method {method!r}")
        coeffs = np.array(coeffs)
        coeffs.setflags(write=False)
        return cls(grid, mu, coeffs)

    @property
    def nodes(self):
        """``x_1 .. x_N``."""
        return self.rep_grid.drop_left().nodes

    @property
    def N(self):
        return self.coeffs.shape[0]

    def __call__(self, x):
        """Matrix ``H_j(x_i)``, shape ``(len(x), N)``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xn = self.nodes
        N = xn.size
        diff = x[:, None] - xn[None, :]
        den = xn[:, None] - xn[None, :]
        np.fill_diagonal(den, 1.0)
        den = np.prod(den, axis=1)
        out = np.empty((x.size, N))
        for j in range(N):
            out[:, j] = np.prod(np.delete(diff, j, axis=1), axis=1) / den[j]
        ratio = np.clip((1.0 + x)[:, None] / (1.0 + xn)[None, :], 0.0, None)
        return out * ratio ** (1.0 - self.mu)

    def eval_weighted(self, x):
        """Same as calling the basis but through the weighted Jacobi expansion."""
        return weighted_modes(self.mu, x, self.N) @ self.coeffs.T

    def reconstruct(self, values, x):
        return self(x) @ np.asarray(values, dtype=float)


def h_basis_eval(basis, j, x):
    """``H_j(x)`` for ``j`` in ``1..N``."""
    if not 1 <= j <= basis.N:
        raise ParameterError(f"basis index must be in 1..{basis.N}, got {j}")
    value = basis(x)[:, j - 1]
    return float(value[0]) if np.ndim(x) == 0 else value


def reconstruct(basis, nodal_values, x):
    """``u_N(x) = sum_j u_j H_j(x)``."""
    values = np.asarray(nodal_values, dtype=float)
    if values.shape != (basis.N,):
        raise ParameterError(f"expected {basis.N} nodal values, got shape {values.shape}")
    out = basis.reconstruct(values, x)
    return float(out[0]) if np.ndim(x) == 0 else out
