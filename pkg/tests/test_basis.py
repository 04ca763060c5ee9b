import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from fracolloc.basis import (
    FracBasis,
    assemble_A,
    coefficients_by_solve,
    coefficients_explicit,
    condition_number_2,
    h_basis_eval,
    reconstruct,
    weighted_modes,
)
from fracolloc.errors import DomainError, ParameterError, SingularMatrixError
from fracolloc.grids import Grid, chebyshev_lobatto, gauss_lobatto_weights, jacobi_mu_lobatto


def test_single_node_entry():
    # P_1^{(1/2,-1/2)} = x + 1/2 takes the values 3/2 and -1/2 at the endpoints
    A = assemble_A(Grid([1.0]), 0.5)
    assert A.entries[0, 0] == pytest.approx(2**-0.5 * 2.0, rel=1e-15)


def test_assemble_drops_left_endpoint():
    A = assemble_A(chebyshev_lobatto(6), 0.5)
    assert A.entries.shape == (6, 6)


def test_assemble_rejects_minus_one_inside():
    with pytest.raises(DomainError):
        assemble_A(np.array([-1.0, -1.0, 0.5]), 0.5)


def test_identity_solve():
    assert_allclose(coefficients_by_solve(np.eye(4)), np.eye(4), atol=0)


def test_singular_detected():
    with pytest.raises(SingularMatrixError):
        coefficients_by_solve(np.zeros((3, 3)))


@pytest.mark.parametrize("N", [3, 10, 25])
def test_solve_residual(N):
    A = assemble_A(chebyshev_lobatto(N), 0.5)
    c = coefficients_by_solve(A)
    res = np.max(np.abs(A.entries @ c.T - np.eye(N)))
    assert res <= 1e-8 * condition_number_2(A)


@pytest.mark.parametrize("N", [4, 8, 12])
@pytest.mark.parametrize("mu", [0.3, 0.5, 0.8])
def test_explicit_matches_solve(N, mu):
    grid = jacobi_mu_lobatto(N, mu)
    rule = gauss_lobatto_weights(N, mu, grid)
    explicit = coefficients_explicit(N, mu, rule)
    solved = coefficients_by_solve(assemble_A(grid, mu))
    assert explicit.shape == (N, N)  # columns n = 1..N, no n = 0
    assert_allclose(explicit, solved, atol=1e-9)


def test_explicit_needs_mu_grid():
    rule = gauss_lobatto_weights(4, 0.5)
    with pytest.raises(ParameterError):
        coefficients_explicit(4, 0.3, rule)


def test_condition_numbers_literal_grid_grow_linearly():
    conds = [condition_number_2(assemble_A(chebyshev_lobatto(N), 0.5)) for N in (20, 50, 100)]
    assert conds == sorted(conds)
    for N, c in zip((20, 50, 100), conds):
        assert c == pytest.approx(1.03 * N, rel=0.1)


@pytest.mark.parametrize("method", ["solve", "explicit"])
def test_kronecker(method):
    basis = FracBasis.build(jacobi_mu_lobatto(4, 0.5), 0.5, method=method)
    assert_allclose(basis(basis.nodes), np.eye(4), atol=1e-10)
    assert_allclose(basis.eval_weighted(basis.nodes), np.eye(4), atol=1e-10)


def test_kronecker_chebyshev_ten():
    basis = FracBasis.build(chebyshev_lobatto(10), 0.5)
    assert_allclose(basis.eval_weighted(basis.nodes), np.eye(10), atol=1e-10)


def test_product_and_weighted_forms_agree():
    basis = FracBasis.build(chebyshev_lobatto(9), 0.35)
    x = np.linspace(-0.999, 1, 57)
    assert_allclose(basis(x), basis.eval_weighted(x), atol=1e-10)


def test_h_basis_scalar_values():
    basis = FracBasis.build(chebyshev_lobatto(5), 0.4)
    xm = basis.nodes
    assert h_basis_eval(basis, 2, xm[1]) == pytest.approx(1.0, abs=1e-12)
    assert h_basis_eval(basis, 2, xm[3]) == pytest.approx(0.0, abs=1e-12)
    assert h_basis_eval(basis, 3, -1.0) == 0.0
    with pytest.raises(ParameterError):
        h_basis_eval(basis, 0, 0.0)


def test_left_endpoint_behaviour():
    mu = 0.3
    basis = FracBasis.build(chebyshev_lobatto(6), mu)
    t = np.array([1e-8, 1e-6])
    vals = basis(-1 + t)[:, 0]
    # H_j ~ C (1+x)^(1-mu)
    ratio = vals / t ** (1 - mu)
    assert ratio[0] == pytest.approx(ratio[1], rel=1e-4)


def test_reconstruct_unit_and_span():
    mu = 0.4
    basis = FracBasis.build(chebyshev_lobatto(7), mu)
    e = np.zeros(7)
    e[3] = 1.0
    assert reconstruct(basis, e, basis.nodes[3]) == pytest.approx(1.0, abs=1e-12)
    f = lambda x: (1 + x) ** (1 - mu)
    x = np.linspace(-1, 1, 101)
    assert_allclose(reconstruct(basis, f(basis.nodes), x), f(x), atol=1e-10)
    assert reconstruct(basis, f(basis.nodes), -1.0) == 0.0
    with pytest.raises(ParameterError):
        reconstruct(basis, np.ones(3), 0.0)


def test_partition_at_nodes():
    basis = FracBasis.build(jacobi_mu_lobatto(9, 0.6), 0.6)
    assert_allclose(basis(basis.nodes).sum(axis=1), 1.0, atol=1e-10)


def test_weighted_modes_zero_at_left():
    assert_allclose(weighted_modes(0.5, [-1.0], 5), 0.0, atol=0)


def test_bad_method_and_mu():
    with pytest.raises(ParameterError):
        FracBasis.build(chebyshev_lobatto(4), 0.5, method="qr")
    with pytest.raises(ParameterError):
        FracBasis.build(chebyshev_lobatto(4), 1.0)


def test_coeffs_read_only():
    basis = FracBasis.build(chebyshev_lobatto(4), 0.5)
    with pytest.raises(ValueError):
        basis.coeffs[0, 0] = 1.0


@settings(max_examples=25, deadline=None)
@given(N=st.integers(2, 20), mu=st.floats(0.05, 0.95), k=st.integers(0, 19))
def test_span_members_reconstructed(N, mu, k):
    k = k % N
    basis = FracBasis.build(chebyshev_lobatto(N), mu)
    f = lambda x: (1 + x) ** (1 - mu + k)
    x = np.linspace(-1, 1, 23)
    assert_allclose(basis.reconstruct(f(basis.nodes), x), f(x), atol=1e-9 * 2**k)
