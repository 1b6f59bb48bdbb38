"""Matrix model of so(n): the F_ij basis, the -1/2 trace form, exp and Ad.

Skew matrices and group elements are plain ``numpy`` arrays; the
``check_*`` helpers enforce the invariants at API boundaries.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .config import tolerances
from .exceptions import BadDimension, DimensionMismatch


def F(n: int, i: int, j: int) -> np.ndarray:
    """F_{i,j} = E_{i,j} - E_{j,i} with 1-based indices."""
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise BadDimension(f"bad index pair ({i}, {j}) for n={n}")
    m = np.zeros((n, n))
    m[i - 1, j - 1] = 1.0
    m[j - 1, i - 1] = -1.0
    return m


@lru_cache(maxsize=None)
def so_pairs(n: int) -> tuple[tuple[int, int], ...]:
    if n < 2:
        raise BadDimension(f"so(n) needs n >= 2, got {n}")
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def so_basis(n: int) -> list[np.ndarray]:
    """F_{i,j}, i < j, in lexicographic order."""
    return [F(n, i, j) for i, j in so_pairs(n)]


@lru_cache(maxsize=None)
def _upper(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def to_coeffs(X: np.ndarray) -> np.ndarray:
    """Coordinates of a skew matrix over so_basis (which is trace-orthonormal)."""
    X = np.asarray(X)
    return X[_upper(X.shape[0])].astype(float)


def from_coeffs(c, n: int) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (n * (n - 1) // 2,):
        raise DimensionMismatch(f"expected {n * (n - 1) // 2} coefficients, got {c.shape}")
    X = np.zeros((n, n))
    X[_upper(n)] = c
    return X - X.T


def _same_shape(A, B):
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape}")


def trace_product(A: np.ndarray, B: np.ndarray) -> float:
    """<A, B> = -1/2 tr(AB)."""
    A, B = np.asarray(A), np.asarray(B)
    _same_shape(A, B)
    return -0.5 * float(np.einsum("ij,ji->", A, B))


def mat_bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    _same_shape(A, B)
    return A @ B - B @ A


def check_skew(A: np.ndarray, tol: float | None = None) -> np.ndarray:
    tol = tolerances().bracket if tol is None else tol
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"not square: {A.shape}")
    if np.max(np.abs(A + A.T), initial=0.0) > tol:
        raise ValueError("matrix is not skew-symmetric")
    return A


def check_orthogonal(g: np.ndarray, tol: float | None = None) -> np.ndarray:
    tol = tolerances().orthogonality if tol is None else tol
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if np.max(np.abs(g.T @ g - np.eye(n))) > tol or abs(np.linalg.det(g) - 1.0) > tol:
        raise ValueError("matrix is not in SO(n)")
    return g


_TAYLOR_ORDER = 18


def exp_matrix(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    The argument is scaled to 1-norm <= 1/2, where the series is summed until
    the terms drop below 1e-17 (at most order 18, remainder below 1e-22);
    squaring then loses at most a few ulps per step.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"not square: {A.shape}")
    n = A.shape[0]
    norm = float(np.abs(A).sum(axis=0).max()) if n else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    B = A / (2.0 ** s)
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ B / k
        result = result + term
        if np.abs(term).max() <= 1e-17:
            break
    for _ in range(s):
        result = result @ result
    return result


def adjoint(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Ad(g) X = g X g^{-1} = g X g^T for orthogonal g."""
    g, X = np.asarray(g), np.asarray(X)
    _same_shape(g, X)
    return g @ X @ g.T


def random_skew(rng: np.random.Generator, n: int, norm: float | None = None) -> np.ndarray:
    A = rng.standard_normal((n, n))
    A = A - A.T
    if norm is not None:
        A *= norm / np.linalg.norm(A, 2)
    return A


def matrix_to_json(A: np.ndarray) -> list[list[float]]:
    """Row-major nested lists."""
    return [[float(x) for x in row] for row in np.asarray(A)]


def matrix_from_json(rows) -> np.ndarray:
    A = np.asarray(rows, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {A.shape}")
    return A
