"""Numeric Lie algebras given by structure constants and an invariant Gram matrix.

Elements are coefficient vectors. Two realisations share one interface:
:class:`MatrixAlgebra` (so(n), group elements are n x n rotations) and
:class:`TableAlgebra` (an abstract bracket table, group elements are the
matrices of Ad in the coefficient basis).
"""
from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch
from .lie import adjoint, exp_matrix, from_coeffs, mat_bracket, so_basis, so_pairs, to_coeffs
from .structure import BracketTable


class LieAlgebra:
    name: str

    def __init__(self, structure: np.ndarray, gram: np.ndarray, labels):
        self.c = np.asarray(structure, dtype=float)
        self.gram = np.asarray(gram, dtype=float)
        self.labels = tuple(labels)
        self.dim = self.gram.shape[0]
        if self.c.shape != (self.dim,) * 3:
            raise DimensionMismatch("structure tensor and Gram matrix disagree")

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} coefficients, got shape {x.shape}")
        return x

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", self._vec(x), self._vec(y), self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad(x): ad(x) @ y == bracket(x, y)."""
        return np.einsum("i,ijk->kj", self._vec(x), self.c)

    def inner(self, x, y) -> float:
        return float(self._vec(x) @ self.gram @ self._vec(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def basis(self) -> np.ndarray:
        return np.eye(self.dim)

    # group side, overridden by subclasses
    def identity(self) -> np.ndarray:
        raise NotImplementedError

    def exp(self, x) -> np.ndarray:
        raise NotImplementedError

    def Ad(self, g: np.ndarray, x) -> np.ndarray:
        raise NotImplementedError

    def mul(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        return g @ h


class MatrixAlgebra(LieAlgebra):
    def __init__(self, n: int):
        basis = so_basis(n)
        dim = len(basis)
        c = np.zeros((dim, dim, dim))
        for i, A in enumerate(basis):
            for j, B in enumerate(basis):
                c[i, j] = to_coeffs(mat_bracket(A, B))
        super().__init__(c, np.eye(dim), [f"F{i}{j}" for i, j in so_pairs(n)])
        self.n = n
        self.name = f"so{n}"

    def to_matrix(self, x) -> np.ndarray:
        return from_coeffs(self._vec(x), self.n)

    def from_matrix(self, X) -> np.ndarray:
        return to_coeffs(X)

    def identity(self) -> np.ndarray:
        return np.eye(self.n)

    def exp(self, x) -> np.ndarray:
        return exp_matrix(self.to_matrix(x))

    def Ad(self, g, x) -> np.ndarray:
        return to_coeffs(adjoint(g, self.to_matrix(x)))


class TableAlgebra(LieAlgebra):
    def __init__(self, table: BracketTable):
        super().__init__(table.structure_tensor(), np.array(table.gram(), dtype=float), table.labels)
        self.table = table
        self.name = f"{table.family}{table.root_system.rank}"

    def identity(self) -> np.ndarray:
        return np.eye(self.dim)

    def exp(self, x) -> np.ndarray:
        return exp_matrix(self.ad(x))

    def Ad(self, g, x) -> np.ndarray:
        return g @ self._vec(x)
