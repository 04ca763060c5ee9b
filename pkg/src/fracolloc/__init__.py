"""Spectral collocation for Riemann-Liouville fractional derivatives.

A fractional Lagrange basis built on Jacobi polynomials gives exact
discrete fractional derivatives on its span; collocating at the zeros of
the exact image of a grid-vanishing test function (superconsistent nodes)
gains one extra order of consistency.
"""
from .basis import (
    BasisChangeMatrix,
    FracBasis,
    assemble_A,
    coefficients_by_solve,
    coefficients_explicit,
    condition_number_2,
    h_basis_eval,
    reconstruct,
)
from .errors import (
    BlowUpError,
    BracketingError,
    DomainError,
    FracCollocError,
    InterlacingError,
    NumericalError,
    ParameterError,
    SingularMatrixError,
    ToleranceError,
)
from .grids import (
    Grid,
    QuadratureRule,
    Role,
    chebyshev_lobatto,
    gauss_lobatto_weights,
    jacobi_deriv_zeros,
    jacobi_mu_lobatto,
    jacobi_zeros,
    legendre_lobatto,
    legendre_zeros,
)
from .jacobi import (
    JacobiParams,
    gamma_fn,
    gamma_ratio,
    jacobi_all,
    jacobi_at_minus_one,
    jacobi_deriv,
    jacobi_eval,
    jacobi_norm_sq,
    recurrence_coeffs,
)
from .operators import (
    Kind,
    OperatorMatrix,
    advdiff_matrix,
    basis_composed_deriv,
    basis_frac_deriv,
    basis_integer_deriv,
    frac_diff_matrix,
    second_deriv_matrix,
)
from .oracle import OracleResult, rl_monomial, rl_quadrature, rl_weighted_jacobi
from .solvers import (
    BvpProblem,
    GridChoice,
    OdeProblem,
    SolveReport,
    max_norm_error,
    reference_solution,
    solve_fractional_bvp,
    solve_fractional_ode,
)
from .superconsistency import (
    ChiFunction,
    Family,
    PsiFunction,
    chi_eval,
    chi_second_deriv,
    mixed_collocation_nodes,
    psi_approx_eval,
    psi_eval,
    superconsistent_nodes,
)

__version__ = "0.1.0"
