"""Reductive splits g = h + p1 + p2 and the metric x1<,>|p1 + x2<,>|p2.

Every element is a coefficient vector over the ambient algebra's basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .algebra import LieAlgebra, MatrixAlgebra
from .config import tolerances
from .exceptions import DimensionMismatch, InvalidSplit, NotInP, SingularGram

COMPONENTS = ("h", "p", "p1", "p2")


@dataclass(frozen=True)
class MetricParams:
    x1: float
    x2: float

    def __post_init__(self):
        if not (self.x1 > 0 and self.x2 > 0):
            raise ValueError(f"metric parameters must be positive, got ({self.x1}, {self.x2})")

    @property
    def ratio(self) -> float:
        return self.x2 / self.x1

    def is_normal(self, tol: float | None = None) -> bool:
        tol = tolerances().near_equal if tol is None else tol
        return abs(self.x2 - self.x1) <= tol * max(self.x1, self.x2)

    def scaled(self, lam: float) -> "MetricParams":
        return MetricParams(lam * self.x1, lam * self.x2)


class SplitVector(NamedTuple):
    h_part: np.ndarray
    p1_part: np.ndarray
    p2_part: np.ndarray


def _projector(basis: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """<,>-orthogonal projector onto the row span of ``basis``."""
    if basis.shape[0] == 0:
        return np.zeros_like(gram)
    B = basis
    return B.T @ np.linalg.solve(B @ gram @ B.T, B @ gram)


@dataclass(frozen=True, eq=False)
class ReductiveSplit:
    algebra: LieAlgebra
    basis_h: np.ndarray
    basis_p1: np.ndarray
    basis_p2: np.ndarray
    tol: float = 1e-10
    _proj: dict = field(init=False, repr=False)

    def __post_init__(self):
        dim = self.algebra.dim
        bases = []
        for name in ("basis_h", "basis_p1", "basis_p2"):
            B = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            if B.size == 0:
                B = np.zeros((0, dim))
            if B.shape[1] != dim:
                raise DimensionMismatch(f"{name} rows must have {dim} coefficients")
            object.__setattr__(self, name, B)
            bases.append(B)
        G = self.algebra.gram
        if sum(B.shape[0] for B in bases) != dim or np.linalg.matrix_rank(np.vstack(bases)) != dim:
            raise InvalidSplit("h, p1, p2 do not jointly span the algebra")
        scale = max(1.0, float(np.max(np.abs(G))))
        for a in range(3):
            for b in range(a + 1, 3):
                if bases[a].size and bases[b].size and np.max(np.abs(bases[a] @ G @ bases[b].T)) > self.tol * scale:
                    raise InvalidSplit("modules are not mutually orthogonal")
        proj = {"h": _projector(bases[0], G), "p1": _projector(bases[1], G), "p2": _projector(bases[2], G)}
        proj["p"] = proj["p1"] + proj["p2"]
        object.__setattr__(self, "_proj", proj)
        self._check_invariance()

    def _leak(self, X, Y, target: str) -> float:
        w = self.algebra.bracket(X, Y)
        return float(np.max(np.abs(w - self._proj[target] @ w), initial=0.0))

    def _check_invariance(self):
        # [h,h] in h, [h,p_i] in p_i, [p2,p1] in p1
        pairs = [(self.basis_h, self.basis_h, "h"), (self.basis_h, self.basis_p1, "p1"),
                 (self.basis_h, self.basis_p2, "p2"), (self.basis_p2, self.basis_p1, "p1")]
        scale = max(1.0, float(np.max(np.abs(self.algebra.c))))
        for A, B, target in pairs:
            for X in A:
                for Y in B:
                    if self._leak(X, Y, target) > self.tol * scale * (1 + np.abs(X).max()) * (1 + np.abs(Y).max()):
                        raise InvalidSplit(f"bracket leaves {target}")

    @property
    def basis_p(self) -> np.ndarray:
        return np.vstack([self.basis_p1, self.basis_p2])

    def projector(self, component: str) -> np.ndarray:
        if component not in COMPONENTS:
            raise ValueError(f"component must be one of {COMPONENTS}")
        return self._proj[component]

    def in_p(self, V, tol: float | None = None) -> bool:
        tol = tolerances().membership if tol is None else tol
        V = self.algebra._vec(V)
        return self.algebra.norm(self._proj["h"] @ V) <= tol * (1 + self.algebra.norm(V))

    def require_p(self, *vs) -> None:
        for V in vs:
            if not self.in_p(V):
                raise NotInP("vector has a nonzero h-component")

    def metric_operator(self, params: MetricParams) -> np.ndarray:
        """A with (X, Y) = <X, A Y>; zero on h."""
        return params.x1 * self._proj["p1"] + params.x2 * self._proj["p2"]


def project(split: ReductiveSplit, V, component: str) -> np.ndarray:
    return split.projector(component) @ split.algebra._vec(V)


def split_vector(split: ReductiveSplit, V) -> SplitVector:
    return SplitVector(*(project(split, V, c) for c in ("h", "p1", "p2")))


def metric_inner(split: ReductiveSplit, params: MetricParams, X, Y) -> float:
    split.require_p(X, Y)
    return _minner(split, params, X, Y)


def _minner(split, params, X, Y) -> float:
    """(P X, P Y) without the membership check."""
    return float(split.algebra._vec(X) @ split.algebra.gram @ split.metric_operator(params) @ split.algebra._vec(Y))


def u_map(split: ReductiveSplit, params: MetricParams, X, Y) -> np.ndarray:
    """U(X, Y) in p defined by 2(U(X,Y), Z) = ([Z,X]_p, Y) + (X, [Z,Y]_p) for all Z in p."""
    split.require_p(X, Y)
    alg = split.algebra
    Bp = split.basis_p
    gamma = np.array([[_minner(split, params, a, b) for b in Bp] for a in Bp])
    rhs = np.array([0.5 * (_minner(split, params, alg.bracket(Z, X), Y) + _minner(split, params, X, alg.bracket(Z, Y)))
                    for Z in Bp])
    if np.linalg.cond(gamma) > 1e12:
        raise SingularGram("metric Gram matrix on p is singular")
    return Bp.T @ np.linalg.solve(gamma, rhs)


class GeodesicResidual(NamedTuple):
    is_geodesic: bool
    residual: float


def geodesic_residual(split: ReductiveSplit, params: MetricParams, W) -> float:
    """max over the p-basis V of |(W_p, [W, V]_p)| / (|W_p| |V|), metric norms.

    A further division by max(1, |W|) keeps the residual homogeneous of degree 0
    for large W.
    """
    alg = split.algebra
    W = alg._vec(W)
    Wp = split._proj["p"] @ W
    nw = np.sqrt(max(_minner(split, params, Wp, Wp), 0.0))
    if nw == 0.0:
        return 0.0
    worst = 0.0
    nw *= max(1.0, alg.norm(W))
    for V in split.basis_p:
        nv = np.sqrt(_minner(split, params, V, V))
        worst = max(worst, abs(_minner(split, params, Wp, alg.bracket(W, V))) / (nw * nv))
    return worst


def is_geodesic_vector(split: ReductiveSplit, params: MetricParams, W, tol: float | None = None) -> GeodesicResidual:
    tol = tolerances().geodesic if tol is None else tol
    r = geodesic_residual(split, params, W)
    return GeodesicResidual(r <= tol, r)


@dataclass(frozen=True)
class AffineFamily:
    """{particular + directions^T t}; ``empty`` when the system has no solution."""
    particular: np.ndarray
    directions: np.ndarray
    residual: float
    empty: bool = False

    @property
    def dimension(self) -> int:
        return -1 if self.empty else self.directions.shape[0]

    def point(self, t=None) -> np.ndarray:
        if self.empty:
            raise ValueError("empty family has no points")
        if t is None or self.directions.shape[0] == 0:
            return self.particular.copy()
        return self.particular + np.asarray(t, dtype=float) @ self.directions

    def sample(self, rng: np.random.Generator, k: int, spread: float = 1.0) -> list[np.ndarray]:
        return [self.point(rng.normal(scale=spread, size=self.directions.shape[0])) for _ in range(k)]


def geodesic_completion(split: ReductiveSplit, params: MetricParams, V, tol: float | None = None) -> AffineFamily:
    """All Z in h with V + Z geodesic: (V, [Z, B_k]_p) = -(V, [V, B_k]_p) for every p-basis B_k."""
    tol = tolerances().equality if tol is None else tol
    split.require_p(V)
    alg = split.algebra
    V = alg._vec(V)
    Bh, Bp = split.basis_h, split.basis_p
    A = np.array([[_minner(split, params, V, alg.bracket(H, B)) for H in Bh] for B in Bp]).reshape(len(Bp), len(Bh))
    r = np.array([-_minner(split, params, V, alg.bracket(V, B)) for B in Bp])
    dim_h = Bh.shape[0]
    if dim_h == 0:
        res = float(np.max(np.abs(r), initial=0.0))
        return AffineFamily(np.zeros(alg.dim), np.zeros((0, alg.dim)), res, res > tol)
    z, *_ = np.linalg.lstsq(A, r, rcond=None)
    _, s, vt = np.linalg.svd(A)
    # relative rank cut: A is linear in V, so an absolute floor breaks for tiny V
    rank = int(np.sum(s > 1e-10 * s[0])) if s.size and s[0] > 0 else 0
    null = vt[rank:]
    res = float(np.max(np.abs(A @ z - r), initial=0.0))
    size = max(1.0, params.x1, params.x2) * alg.inner(V, V) * max(1.0, float(np.max(np.abs(alg.c))))
    empty = res > tol * size
    return AffineFamily(Bh.T @ z, null @ Bh, res, empty)


# -- JSON space files ------------------------------------------------------------

_ALGEBRAS = {"so5": 5, "so3": 3, "so4": 4, "so6": 6, "so7": 7}


def split_from_dict(doc: dict) -> ReductiveSplit:
    name = doc.get("algebra")
    if name not in _ALGEBRAS:
        raise ValueError(f"unsupported algebra {name!r}; expected one of {sorted(_ALGEBRAS)}")
    alg = MatrixAlgebra(_ALGEBRAS[name])
    try:
        bases = [np.asarray(doc[k], dtype=float).reshape(-1, alg.dim) for k in ("h_basis", "p1_basis", "p2_basis")]
    except KeyError as exc:
        raise ValueError(f"space file lacks {exc.args[0]}") from None
    return ReductiveSplit(alg, *bases)


def load_space(path) -> ReductiveSplit:
    return split_from_dict(json.loads(Path(path).read_text()))


def split_to_dict(split: ReductiveSplit) -> dict:
    if not isinstance(split.algebra, MatrixAlgebra):
        raise ValueError("only matrix-model splits serialise to space files")
    return {"algebra": split.algebra.name,
            "h_basis": split.basis_h.tolist(),
            "p1_basis": split.basis_p1.tolist(),
            "p2_basis": split.basis_p2.tolist()}
