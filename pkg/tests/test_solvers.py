import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracolloc.errors import BlowUpError, ParameterError, SingularMatrixError
from fracolloc.experiments import table2_rhs, table3_rhs
from fracolloc.grids import chebyshev_lobatto
from fracolloc.oracle import rl_monomial
from fracolloc.solvers import (
    CSV_HEADER,
    BvpProblem,
    GridChoice,
    OdeProblem,
    bvp_collocation_grid,
    lu_solve_refined,
    max_norm_error,
    ode_collocation_grid,
    reference_solution,
    sample,
    solve_fractional_bvp,
    solve_fractional_ode,
    with_error,
)

ODE_CHOICES = ["C1", "C2", "C3"]
BVP_CHOICES = ["C4", "C5", "C6"]


@pytest.fixture(scope="module")
def ode_ref():
    return reference_solution(OdeProblem(table2_rhs, 0.5), 50)


@pytest.fixture(scope="module")
def bvp_ref():
    return reference_solution(BvpProblem(table3_rhs, 0.5, 10.0), 50)


@pytest.mark.parametrize("choice", ODE_CHOICES)
@pytest.mark.parametrize("sigma", [0.2, 0.5, 0.8])
def test_span_exactness(choice, sigma):
    N = 7
    report = solve_fractional_ode(lambda x: math.gamma(sigma + 1), sigma, N, choice)
    x = report.nodes
    assert_allclose(report.nodal_values, (1 + x) ** sigma, atol=1e-12)
    assert report.residual <= 1e-12


@pytest.mark.parametrize("choice", ODE_CHOICES)
def test_polynomial_image_recovered(choice):
    sigma, k, N = 0.4, 3, 6
    g = lambda x: math.gamma(sigma + k + 1) / math.factorial(k) * (1 + x) ** k
    report = solve_fractional_ode(g, sigma, N, choice)
    z = np.linspace(-1, 1, 17)
    assert_allclose(report.eval(z), (1 + z) ** (sigma + k), atol=1e-10)


@pytest.mark.parametrize("choice", BVP_CHOICES)
def test_manufactured_bvp(choice):
    sigma, K, N = 0.5, 10.0, 6
    # u = (1+x)^(s+1) (1-x) = 2 (1+x)^(s+1) - (1+x)^(s+2)
    d2 = lambda x: 2 * (sigma + 1) * sigma * (1 + x) ** (sigma - 1) - (sigma + 2) * (sigma + 1) * (1 + x) ** sigma
    frac = lambda x: np.array([2 * rl_monomial(sigma + 1, sigma, t).value - rl_monomial(sigma + 2, sigma, t).value for t in np.atleast_1d(x)])
    report = solve_fractional_bvp(lambda x: -d2(x) + K * frac(x), sigma, K, N, choice)
    x = report.nodes
    assert_allclose(report.nodal_values, (1 + x) ** (sigma + 1) * (1 - x), atol=1e-9)
    assert report.nodal_values[-1] == 0.0


def test_reference_self_convergence(ode_ref):
    other = reference_solution(OdeProblem(table2_rhs, 0.5), 60)
    x = np.linspace(-1, 1, 1001)
    assert np.max(np.abs(ode_ref.eval(x) - other.eval(x))) <= 1e-10


def test_reference_uses_chebyshev_grids(ode_ref, bvp_ref):
    assert_allclose(ode_ref.nodes, chebyshev_lobatto(50).drop_left().nodes, atol=0)
    assert ode_ref.choice is GridChoice.REFERENCE
    assert len(bvp_ref.colloc) == 49


@pytest.mark.parametrize(
    "N,choice,expected",
    [(6, "C3", 0.0084), (4, "C1", 0.4057), (15, "C3", 2.5710e-07), (8, "C1", 0.0140), (8, "C2", 0.0316), (8, "C3", 0.0015)],
)
def test_table2_values(ode_ref, N, choice, expected):
    report = solve_fractional_ode(ode_ref.problem, None, N, choice)
    assert max_norm_error(report, ode_ref) == pytest.approx(expected, rel=0.05)


@pytest.mark.parametrize("N,choice,expected", [(4, "C6", 0.0045), (15, "C4", 8.2687e-04), (10, "C5", 0.0020)])
def test_table3_values(bvp_ref, N, choice, expected):
    report = solve_fractional_bvp(bvp_ref.problem, None, None, N, choice)
    assert max_norm_error(report, bvp_ref) == pytest.approx(expected, rel=0.05)


def test_superconsistent_errors_decrease(ode_ref):
    errors = [max_norm_error(solve_fractional_ode(ode_ref.problem, None, N, "C3"), ode_ref) for N in range(4, 16)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_mesh_error_option(ode_ref):
    report = solve_fractional_ode(ode_ref.problem, None, 8, "C3")
    on_nodes = max_norm_error(report, ode_ref)
    on_mesh = max_norm_error(report, ode_ref, points="mesh")
    assert on_mesh >= on_nodes * 0.999
    with pytest.raises(ParameterError):
        max_norm_error(report, ode_ref, points="everywhere")


def test_identical_reports_zero_error():
    report = solve_fractional_ode(table2_rhs, 0.5, 6, "C1")
    assert max_norm_error(report, report) == 0.0


def test_with_error_and_csv():
    report = solve_fractional_ode(table2_rhs, 0.5, 6, "C1")
    assert report.csv_row().split(",")[4] == "NA"
    filled = with_error(report, report)
    fields = filled.csv_row().split(",")
    assert len(fields) == len(CSV_HEADER.split(","))
    assert fields[:5] == ["6", "0.5", "0", "C1", "0"]


def test_collocation_grids():
    assert len(ode_collocation_grid(6, 0.5, "C2")) == 6
    assert ode_collocation_grid(6, 0.5, "C2").nodes[-1] == 1.0
    assert len(bvp_collocation_grid(6, 0.5, 10.0, "C5")) == 5
    assert len(bvp_collocation_grid(6, 0.5, 10.0, "C6")) == 5
    with pytest.raises(ParameterError):
        ode_collocation_grid(6, 0.5, "C4")
    with pytest.raises(ParameterError):
        bvp_collocation_grid(6, 0.5, 1.0, "C1")
    with pytest.raises(ValueError):
        GridChoice("C7")


def test_choice_flags():
    assert GridChoice.C2.is_ode and not GridChoice.C2.is_bvp
    assert GridChoice.C6.is_bvp and "superconsistent" in GridChoice.C6.description


def test_parameter_checks():
    with pytest.raises(ParameterError):
        OdeProblem(table2_rhs, 1.0)
    with pytest.raises(ParameterError):
        solve_fractional_ode(table2_rhs, 0.5, 1, "C1")
    with pytest.raises(ParameterError):
        solve_fractional_bvp(table3_rhs, 0.0, 1.0, 5, "C4")


def test_blow_up_propagates():
    with pytest.raises(BlowUpError):
        solve_fractional_bvp(table3_rhs, 0.8, 50.0, 4, "C6")


def test_singular_solve():
    with pytest.raises(SingularMatrixError):
        lu_solve_refined(np.zeros((3, 3)), np.ones(3))


def test_refined_solve_residual():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(20, 20))
    rhs = rng.normal(size=20)
    u, res = lu_solve_refined(M, rhs)
    assert_allclose(M @ u, rhs, atol=1e-12)
    assert res <= 1e-12


def test_sample_broadcasts_constants():
    assert_allclose(sample(lambda x: 2.0, [0.1, 0.2]), [2.0, 2.0])


def test_eval_scalar_and_left_endpoint():
    report = solve_fractional_ode(table2_rhs, 0.5, 6, "C3")
    assert isinstance(report.eval(0.3), float)
    assert report.eval(-1.0) == 0.0
