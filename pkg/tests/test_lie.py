import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.linalg import expm

from deltahomog.algebra import MatrixAlgebra, TableAlgebra
from deltahomog.embedding import embed_b_table
from deltahomog.exceptions import BadDimension, DimensionMismatch, UnsupportedRank
from deltahomog.lie import (F, adjoint, check_orthogonal, check_skew, exp_matrix, from_coeffs, mat_bracket,
                            matrix_from_json, matrix_to_json, random_skew, so_basis, so_pairs, to_coeffs,
                            trace_product)
from conftest import table

floats = st.floats(-3, 3, allow_nan=False)


def test_basis_shape_and_order():
    assert so_pairs(4) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert len(so_basis(5)) == 10
    with pytest.raises(BadDimension):
        so_pairs(1)
    with pytest.raises(BadDimension):
        F(3, 2, 2)


def test_basis_is_trace_orthonormal():
    B = so_basis(5)
    G = np.array([[trace_product(a, b) for b in B] for a in B])
    assert np.array_equal(G, np.eye(10))


def test_frozen_brackets():
    # [F12, F23] = F13 and [F12, F34] = 0
    assert np.array_equal(mat_bracket(F(4, 1, 2), F(4, 2, 3)), F(4, 1, 3))
    assert not mat_bracket(F(4, 1, 2), F(4, 3, 4)).any()
    assert np.array_equal(mat_bracket(F(3, 1, 2), F(3, 1, 3)), -F(3, 2, 3))


@given(arrays(float, 10, elements=floats))
def test_coefficient_roundtrip(c):
    X = from_coeffs(c, 5)
    assert np.array_equal(X, -X.T)
    assert np.array_equal(to_coeffs(X), c)


def test_from_coeffs_dimension_guard():
    with pytest.raises(DimensionMismatch):
        from_coeffs(np.zeros(9), 5)
    with pytest.raises(DimensionMismatch):
        mat_bracket(np.zeros((3, 3)), np.zeros((4, 4)))


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("size", [1e-8, 0.3, 2.0, 40.0])
def test_exp_matches_scipy(n, size):
    rng = np.random.default_rng(n * 100 + int(size))
    A = random_skew(rng, n, size)
    ours, ref = exp_matrix(A), expm(A)
    assert np.max(np.abs(ours - ref)) <= 1e-12 * max(1.0, size)
    check_orthogonal(ours)


def test_exp_of_rotation_generator():
    t = 0.7
    R = exp_matrix(t * F(2, 1, 2))
    assert np.allclose(R, [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], atol=1e-15)
    assert np.array_equal(exp_matrix(np.zeros((3, 3))), np.eye(3))


@given(arrays(float, 10, elements=floats), arrays(float, 10, elements=floats))
def test_adjoint_is_bracket_homomorphism(a, b):
    rng = np.random.default_rng(1)
    g = exp_matrix(random_skew(rng, 5))
    X, Y = from_coeffs(a, 5), from_coeffs(b, 5)
    lhs = adjoint(g, mat_bracket(X, Y))
    rhs = mat_bracket(adjoint(g, X), adjoint(g, Y))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * (1 + np.abs(X).max() * np.abs(Y).max())
    assert abs(trace_product(adjoint(g, X), adjoint(g, Y)) - trace_product(X, Y)) <= 1e-10 * (1 + np.abs(a).sum() * np.abs(b).sum())


def test_checks_reject_bad_input():
    with pytest.raises(ValueError):
        check_skew(np.eye(3))
    with pytest.raises(ValueError):
        check_orthogonal(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(DimensionMismatch):
        check_skew(np.zeros((2, 3)))
    assert check_skew(F(3, 1, 2)) is not None


def test_json_roundtrip():
    A = random_skew(np.random.default_rng(3), 4)
    assert np.array_equal(matrix_from_json(matrix_to_json(A)), A)
    with pytest.raises(DimensionMismatch):
        matrix_from_json([1.0, 2.0])


# -- embedding -------------------------------------------------------------------

@pytest.mark.parametrize("rank", [1, 2, 3])
def test_b_table_embeds(rank):
    rep = embed_b_table(table("B", rank))
    assert rep.bracket_deviation <= 1e-10
    assert rep.gram_deviation <= 1e-10
    assert rep.scale == 1.0
    assert len(rep.images) == table("B", rank).dim


def test_embedding_rejects_other_families():
    with pytest.raises(UnsupportedRank):
        embed_b_table(table("C", 2))


# -- numeric algebras ------------------------------------------------------------------

def test_matrix_algebra_bracket_agrees_with_matrices():
    alg = MatrixAlgebra(5)
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal(10), rng.standard_normal(10)
    assert np.allclose(alg.bracket(x, y), to_coeffs(mat_bracket(alg.to_matrix(x), alg.to_matrix(y))), atol=1e-13)
    assert np.allclose(alg.ad(x) @ y, alg.bracket(x, y), atol=1e-13)
    assert alg.labels[0] == "F12" and alg.name == "so5"
    with pytest.raises(DimensionMismatch):
        alg.bracket(np.zeros(3), y)


@pytest.mark.parametrize("case", [("B", 2), ("G2", 2)])
def test_table_algebra_group_action(case):
    alg = TableAlgebra(table(*case))
    rng = np.random.default_rng(5)
    x, y, z = (rng.standard_normal(alg.dim) for _ in range(3))
    g = alg.exp(0.4 * z)
    lhs = alg.Ad(g, alg.bracket(x, y))
    rhs = alg.bracket(alg.Ad(g, x), alg.Ad(g, y))
    assert np.allclose(lhs, rhs, atol=1e-10)
    assert abs(alg.inner(alg.Ad(g, x), alg.Ad(g, y)) - alg.inner(x, y)) <= 1e-10
    assert np.allclose(alg.Ad(alg.identity(), x), x)
