"""Collocation solvers for the fractional ODE and the advection-diffusion BVP.

ODE:  D^sigma u = g on (-1, 1], u(-1) = 0.
BVP:  -u'' + K D^sigma u = g on (-1, 1), u(-1) = u(1) = 0.

Both use the representation grid made of the zeros of d/dx P_N^{(mu,-mu)}
and x = 1, with mu = 1 - sigma.  The grid choices differ only in where the
equation is collocated.
"""
from __future__ import annotations

import dataclasses
import enum
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .basis import PIVOT_TOL, FracBasis
from .errors import ParameterError, SingularMatrixError
from .grids import Grid, Role, chebyshev_lobatto, jacobi_mu_lobatto
from .operators import advdiff_matrix, frac_diff_matrix
from .superconsistency import Family, mixed_collocation_nodes, superconsistent_nodes

REFINE_TOL = 1e-12
MESH_POINTS = 1001
MESH_LEFT = -1.0 + 1e-6


class GridChoice(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    REFERENCE = "reference"

    @property
    def description(self):
        return _DESCRIPTIONS[self]

    @property
    def is_ode(self):
        return self in (GridChoice.C1, GridChoice.C2, GridChoice.C3)

    @property
    def is_bvp(self):
        return self in (GridChoice.C4, GridChoice.C5, GridChoice.C6)


_DESCRIPTIONS = {
    GridChoice.C1: "collocation at the representation nodes",
    GridChoice.C2: "collocation at the Chebyshev-Lobatto nodes -cos(j pi/N), j = 1..N",
    GridChoice.C3: "collocation at the zeros of Psi_N (superconsistent)",
    GridChoice.C4: "collocation at the interior representation nodes",
    GridChoice.C5: "collocation at the interior Chebyshev-Lobatto nodes",
    GridChoice.C6: "collocation at the roots of -chi_N'' + K Psi_N (superconsistent)",
    GridChoice.REFERENCE: "Chebyshev-Lobatto nodes for both grids",
}


@dataclass(frozen=True)
class OdeProblem:
    g: Callable
    sigma: float
    K: float = 0.0
    name: str = "ode"

    def __post_init__(self):
        _check_sigma(self.sigma)


@dataclass(frozen=True)
class BvpProblem:
    g: Callable
    sigma: float
    K: float
    name: str = "bvp"

    def __post_init__(self):
        _check_sigma(self.sigma)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one collocation solve.

    ``nodal_values`` are ``u_N(x_1) .. u_N(x_N)``; for the BVP the last one is
    the boundary value 0.  ``error`` is filled by :func:`with_error`.
    """

    problem: object
    N: int
    choice: GridChoice
    basis: FracBasis
    colloc: Grid
    nodal_values: np.ndarray
    residual: float
    runtime_ms: float
    error: float | None = None

    @property
    def sigma(self):
        return self.problem.sigma

    @property
    def K(self):
        return self.problem.K

    @property
    def nodes(self):
        return self.basis.nodes

    def eval(self, x):
        out = self.basis.reconstruct(self.nodal_values, x)
        return float(out[0]) if np.ndim(x) == 0 else out

    def csv_row(self):
        err = "NA" if self.error is None else f"{self.error:.17g}"
        return f"{self.N},{self.sigma:.17g},{self.K:.17g},{self.choice.value},{err},{self.runtime_ms:.3f}"


CSV_HEADER = "N,sigma,K,choice,error,runtime_ms"


def _check_sigma(sigma):
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")


def _check_N(N, minimum=2):
    if int(N) != N or N < minimum:
        raise ParameterError(f"N must be an integer >= {minimum}, got {N}")


def sample(g, z):
    """``g`` at the nodes ``z`` as a float vector; scalar-valued ``g`` is broadcast."""
    z = np.asarray(z, dtype=float)
    return np.array(np.broadcast_to(np.asarray(g(z), dtype=float), z.shape))


def lu_solve_refined(M, rhs):
    """Dense LU with partial pivoting and one step of iterative refinement if needed."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M)
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL:
        raise SingularMatrixError("collocation matrix is singular")
    u = scipy.linalg.lu_solve((lu, piv), rhs)
    scale = max(np.max(np.abs(rhs)), np.finfo(float).tiny)
    r = rhs - M @ u
    if np.max(np.abs(r)) > REFINE_TOL * scale:
        u = u + scipy.linalg.lu_solve((lu, piv), r)
        r = rhs - M @ u
    if not np.all(np.isfinite(u)):
        raise SingularMatrixError("collocation solve produced non-finite values")
    return u, float(np.max(np.abs(r)) / scale)


def _solve_ode(problem, rep_grid, colloc, choice, N):
    start = time.perf_counter()
    mu = 1.0 - problem.sigma
    basis = FracBasis.build(rep_grid, mu)
    D = frac_diff_matrix(basis, colloc, problem.sigma)
    u, res = lu_solve_refined(D.entries, sample(problem.g, D.colloc_grid.nodes))
    elapsed = 1e3 * (time.perf_counter() - start)
    return SolveReport(problem, N, choice, basis, D.colloc_grid, u, res, elapsed)


def _solve_bvp(problem, rep_grid, colloc, choice, N):
    start = time.perf_counter()
    mu = 1.0 - problem.sigma
    basis = FracBasis.build(rep_grid, mu)
    M = advdiff_matrix(basis, colloc, problem.sigma, problem.K)
    u, res = lu_solve_refined(M.entries, sample(problem.g, M.colloc_grid.nodes))
    elapsed = 1e3 * (time.perf_counter() - start)
    return SolveReport(problem, N, choice, basis, M.colloc_grid, np.append(u, 0.0), res, elapsed)


def ode_collocation_grid(N, sigma, choice, rep_grid=None):
    choice = GridChoice(choice)
    rep_grid = jacobi_mu_lobatto(N, 1.0 - sigma) if rep_grid is None else rep_grid
    if choice is GridChoice.C1:
        return rep_grid.drop_left().as_role(Role.COLLOCATION)
    if choice is GridChoice.C2:
        return chebyshev_lobatto(N).drop_left().as_role(Role.COLLOCATION)
    if choice is GridChoice.C3:
        return superconsistent_nodes(Family.MU, N, sigma)
    raise ParameterError(f"{choice.value} is not an ODE grid choice (use C1, C2 or C3)")


def bvp_collocation_grid(N, sigma, K, choice, rep_grid=None):
    choice = GridChoice(choice)
    rep_grid = jacobi_mu_lobatto(N, 1.0 - sigma) if rep_grid is None else rep_grid
    if choice is GridChoice.C4:
        return rep_grid.interior().as_role(Role.COLLOCATION)
    if choice is GridChoice.C5:
        return chebyshev_lobatto(N).interior().as_role(Role.COLLOCATION)
    if choice is GridChoice.C6:
        return mixed_collocation_nodes(Family.MU, N, sigma, K)
    raise ParameterError(f"{choice.value} is not a BVP grid choice (use C4, C5 or C6)")


def solve_fractional_ode(g, sigma, N, choice):
    """Collocation solve of ``D^sigma u = g``, ``u(-1) = 0``."""
    problem = g if isinstance(g, OdeProblem) else OdeProblem(g, sigma)
    _check_N(N)
    rep = jacobi_mu_lobatto(N, 1.0 - problem.sigma)
    colloc = ode_collocation_grid(N, problem.sigma, choice, rep)
    return _solve_ode(problem, rep, colloc, GridChoice(choice), N)


def solve_fractional_bvp(g, sigma, K, N, choice):
    """Collocation solve of ``-u'' + K D^sigma u = g``, ``u(-1) = u(1) = 0``."""
    problem = g if isinstance(g, BvpProblem) else BvpProblem(g, sigma, K)
    _check_N(N)
    rep = jacobi_mu_lobatto(N, 1.0 - problem.sigma)
    colloc = bvp_collocation_grid(N, problem.sigma, problem.K, choice, rep)
    return _solve_bvp(problem, rep, colloc, GridChoice(choice), N)


def reference_solution(problem, N_ref=50):
    """High-order surrogate with Chebyshev-Lobatto nodes for both grids."""
    _check_N(N_ref)
    rep = chebyshev_lobatto(N_ref)
    if isinstance(problem, BvpProblem):
        return _solve_bvp(problem, rep, rep.interior(), GridChoice.REFERENCE, N_ref)
    return _solve_ode(problem, rep, rep.drop_left(), GridChoice.REFERENCE, N_ref)


def evaluation_points(report, points="nodes", mesh_points=MESH_POINTS):
    if points == "nodes":
        return report.nodes
    if points == "mesh":
        return np.linspace(MESH_LEFT, 1.0, mesh_points)
    raise ParameterError(f"points must be 'nodes' or 'mesh', got {points!r}")


def max_norm_error(report, reference, points="nodes", mesh_points=MESH_POINTS):
    """``max |u_N - u_ref|`` on the representation nodes of ``report`` or on a uniform mesh.

    On the nodes ``u_N`` is its own nodal value, so only the reference is interpolated.
    """
    x = evaluation_points(report, points, mesh_points)
    mine = report.nodal_values if points == "nodes" else report.eval(x)
    return float(np.max(np.abs(mine - reference.eval(x))))


def with_error(report, reference, points="nodes", mesh_points=MESH_POINTS):
    return dataclasses.replace(report, error=max_norm_error(report, reference, points, mesh_points))
