"""Reproduction drivers shared by the command line and the acceptance tests."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .basis import FracBasis, assemble_A, condition_number_2
from .errors import FracCollocError, ParameterError
from .grids import chebyshev_lobatto, legendre_zeros
from .operators import basis_composed_deriv, basis_frac_deriv
from .solvers import (
    BvpProblem,
    OdeProblem,
    max_norm_error,
    reference_solution,
    solve_fractional_bvp,
    solve_fractional_ode,
)
from .superconsistency import ChiFunction, Family, mixed_collocation_nodes, superconsistent_nodes

log = logging.getLogger(__name__)

TABLE1_N = (5, 10, 20, 50, 100)
TABLE_N = tuple(range(4, 16))
FIG1_SIGMAS = tuple(round(0.1 * k, 1) for k in range(1, 10))
FIG1_SIGMAS_HIGH = tuple(round(1.0 + 0.1 * k, 1) for k in range(1, 10))


def table2_rhs(x):
    return np.sin(2.0 * (x + 1.0) ** 2)


def table3_rhs(x):
    return np.ones_like(np.asarray(x, dtype=float))


def fig1_function(x):
    return np.sin((x + 1.0) ** 2)


def table1_grid(N, labels="nodes"):
    """Grid behind the table1 row labelled ``N``.

    ``labels="nodes"`` counts all ``N`` Chebyshev-Lobatto nodes including -1
    (``A`` is ``(N-1) x (N-1)``), which is the reading that reproduces the
    reference values.  ``labels="size"`` uses ``-cos(j pi/N)``, ``j = 1..N``
    (``A`` is ``N x N``).
    """
    if labels == "nodes":
        return chebyshev_lobatto(N - 1)
    if labels == "size":
        return chebyshev_lobatto(N)
    raise ParameterError(f"labels must be 'nodes' or 'size', got {labels!r}")


def table1_rows(Ns=TABLE1_N, mu=0.5, labels="nodes"):
    return [(N, condition_number_2(assemble_A(table1_grid(N, labels), mu))) for N in Ns]


@dataclass(frozen=True)
class ErrorRow:
    N: int
    errors: tuple  # None marks a failed solve
    messages: tuple = ()

    @property
    def ok(self):
        return all(e is not None for e in self.errors)


def _error_rows(solve, problem, Ns, choices, N_ref, points, mesh_points):
    ref = reference_solution(problem, N_ref)
    rows = []
    for N in Ns:
        errors, messages = [], []
        for choice in choices:
            try:
                report = solve(N, choice)
                errors.append(max_norm_error(report, ref, points, mesh_points))
            except FracCollocError as exc:
                if isinstance(exc, ParameterError):
                    raise
                log.warning("N=%d %s failed: %s", N, choice, exc)
                errors.append(None)
                messages.append(f"{choice}: {exc}")
        rows.append(ErrorRow(N, tuple(errors), tuple(messages)))
    return rows


def table2_rows(Ns=TABLE_N, sigma=0.5, choices=("C1", "C2", "C3"), N_ref=50, points="nodes", mesh_points=1001):
    problem = OdeProblem(table2_rhs, sigma, name="table2")
    return _error_rows(
        lambda N, c: solve_fractional_ode(problem, sigma, N, c), problem, Ns, choices, N_ref, points, mesh_points
    )


def table3_rows(
    Ns=TABLE_N, sigma=0.5, K=10.0, choices=("C4", "C5", "C6"), N_ref=50, points="nodes", mesh_points=1001, g=None
):
    problem = BvpProblem(table3_rhs if g is None else g, sigma, K, name="table3")
    return _error_rows(
        lambda N, c: solve_fractional_bvp(problem, sigma, K, N, c), problem, Ns, choices, N_ref, points, mesh_points
    )


def fig1_columns(N=19, sigmas=FIG1_SIGMAS, mesh=None, f=fig1_function):
    """``D^sigma_N f`` on ``mesh`` for each order; orders in (1, 2) use ``D D^(sigma-1)``.

    Returns ``(mesh, {sigma: values})``.
    """
    mesh = np.linspace(-1.0, 1.0, 201) if mesh is None else np.asarray(mesh, dtype=float)
    grid = chebyshev_lobatto(N)
    samples = f(grid.drop_left().nodes)
    out = {}
    for s in sigmas:
        if 0.0 < s < 1.0:
            basis = FracBasis.build(grid, 1.0 - s)
            out[s] = basis_frac_deriv(basis, None, mesh) @ samples
        elif 1.0 < s < 2.0:
            basis = FracBasis.build(grid, 2.0 - s)
            out[s] = basis_composed_deriv(basis, None, mesh) @ samples
        else:
            raise ParameterError(f"fractional orders must lie in (0, 1) or (1, 2), got {s}")
    return mesh, out


@dataclass(frozen=True)
class NodeSet:
    family: str
    N: int
    mu: float
    kind: str
    nodes: np.ndarray | None
    message: str = ""


def node_sets(family, N, mus, K=None):
    """Representation grid, Legendre zeros, Psi zeros and (with ``K``) mixed roots per ``mu``."""
    family = Family(family)
    out = []
    for mu in mus:
        chi = ChiFunction(family, N, mu)
        out.append(NodeSet(family.value, N, mu, "rep", chi.representation_grid().nodes))
        out.append(NodeSet(family.value, N, mu, "legendre", legendre_zeros(N).nodes))
        try:
            out.append(NodeSet(family.value, N, mu, "psi", superconsistent_nodes(family, N, 1.0 - mu).nodes))
        except FracCollocError as exc:
            if isinstance(exc, ParameterError):
                raise
            out.append(NodeSet(family.value, N, mu, "psi", None, str(exc)))
        if K is not None and 0.0 < mu < 1.0:
            try:
                nodes = mixed_collocation_nodes(family, N, 1.0 - mu, K).nodes
                out.append(NodeSet(family.value, N, mu, "mixed", nodes))
            except FracCollocError as exc:
                if isinstance(exc, ParameterError):
                    raise
                out.append(NodeSet(family.value, N, mu, "mixed", None, str(exc)))
    return out
