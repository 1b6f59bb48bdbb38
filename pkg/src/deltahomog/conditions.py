"""Algebraic necessary conditions for delta-vectors and delta-homogeneity.

Residuals are made scale-free before comparison: each is divided by the
matching power of the input norms and by max(x1, x2), so verdicts do not
change under (x1, x2, W) -> (l x1, l x2, m W).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import OracleBudget, tolerances
from .exceptions import NearEqualParams
from .metric import MetricParams, ReductiveSplit, _minner
from .oracle import DeltaCertificate, is_delta_vector_numeric

RANDOM_DIRECTIONS = 64


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    holds: bool
    worst_residual: float
    witness: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, np.ndarray):
            w = w.tolist()
        elif isinstance(w, (tuple, list)):
            w = [x.tolist() if isinstance(x, np.ndarray) else x for x in w]
        return {"condition_id": self.condition_id, "holds": bool(self.holds),
                "worst_residual": float(self.worst_residual), "witness": w}


def _xmax(params: MetricParams) -> float:
    return max(params.x1, params.x2)


def _p(split, w):
    return split.projector("p") @ w


def quadratic_form(split: ReductiveSplit, params: MetricParams, V, W) -> np.ndarray:
    """Symmetric M with X^T M X = (V, [X,[X,W]]_p) + |[X,W]_p|^2 in coordinates."""
    alg = split.algebra
    adW = -alg.ad(W)                         # column j is [e_j, W]
    A = split.metric_operator(params)
    GA = alg.gram @ A
    n = alg.dim
    second = np.empty((n, n))
    for j in range(n):
        second[:, j] = [V @ GA @ alg.bracket(e, adW[:, j]) for e in np.eye(n)]
    M = 0.5 * (second + second.T) + adW.T @ GA @ adW
    return 0.5 * (M + M.T)


def _top_direction(split, M) -> np.ndarray:
    """Maximiser of X^T M X / <X, X>."""
    G = split.algebra.gram
    w, U = np.linalg.eigh(G)
    Gih = U @ np.diag(w ** -0.5) @ U.T
    _, vecs = np.linalg.eigh(Gih @ M @ Gih)
    return Gih @ vecs[:, -1]


def default_directions(split: ReductiveSplit, seed: int = 0) -> np.ndarray:
    n = split.algebra.dim
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((RANDOM_DIRECTIONS, n))
    R /= np.sqrt(np.einsum("ij,jk,ik->i", R, split.algebra.gram, R))[:, None]
    return np.vstack([np.eye(n), R])


def ncdo_check(split: ReductiveSplit, params: MetricParams, V, U, directions=None, seed: int = 0) -> ConditionReport:
    """(V, [X, V+U]_p) = 0 and (V, [X,[X, V+U]]_p) + |[X, V+U]_p|^2 <= 0 over directions X.

    Default directions: the ambient basis, 64 random unit vectors and the top
    eigenvector of the quadratic form, which makes the second test exact.
    """
    alg = split.algebra
    V, U = alg._vec(V), alg._vec(U)
    split.require_p(V)
    W = V + U
    nW2 = max(alg.inner(W, W), 1e-300)
    if directions is None:
        dirs = list(default_directions(split, seed))
        dirs.append(_top_direction(split, quadratic_form(split, params, V, W)))
    else:
        dirs = [alg._vec(x) for x in directions]
    worst2 = worst3 = -np.inf
    w2 = w3 = None
    for X in dirs:
        nX = alg.norm(X)
        if nX == 0.0:
            continue
        XW = alg.bracket(X, W)
        r2 = abs(_minner(split, params, V, XW)) / (nX * _xmax(params) * nW2)
        XXW = alg.bracket(X, XW)
        XWp = _p(split, XW)
        r3 = (_minner(split, params, V, XXW) + _minner(split, params, XWp, XWp)) / (nX * nX * _xmax(params) * nW2)
        if r2 > worst2:
            worst2, w2 = r2, X
        if r3 > worst3:
            worst3, w3 = r3, X
    ok2, ok3 = worst2 <= tolerances().equality, worst3 <= tolerances().inequality
    witness = None if ok2 and ok3 else (w2 if not ok2 else w3)
    return ConditionReport("ncdo", bool(ok2 and ok3), float(max(worst2, worst3)), witness,
                           {"rav2": float(worst2), "rav3": float(worst3), "directions": len(dirs)})


def _near_equal(params: MetricParams) -> bool:
    return params.is_normal()


def t31_4_check(split: ReductiveSplit, params: MetricParams, X, Y, Z) -> ConditionReport:
    """[Z, Y] = 0 and [X, Y] = x1/(x2 - x1) [X, Z] for a geodesic X + Y + Z."""
    if _near_equal(params):
        raise NearEqualParams("x1 and x2 are too close for 1/(x2 - x1)")
    alg = split.algebra
    X, Y, Z = (alg._vec(v) for v in (X, Y, Z))
    size = (alg.norm(X) + alg.norm(Y) + alg.norm(Z)) ** 2
    if size == 0.0:
        return ConditionReport("t31_4", True, 0.0)
    k = params.x1 / (params.x2 - params.x1)
    r1 = alg.norm(alg.bracket(Z, Y)) / size
    r2 = alg.norm(alg.bracket(X, Y) - k * alg.bracket(X, Z)) / (size * max(1.0, abs(k)))
    worst = max(r1, r2)
    return ConditionReport("t31_4", worst <= tolerances().equality, float(worst), None,
                           {"ZY": float(r1), "XY": float(r2)})


def t31_5_terms(split: ReductiveSplit, params: MetricParams, X, Y, Z, U) -> list[float]:
    """The seven terms of the second-order inequality for a delta-vector X + Y + Z and U in p1."""
    alg = split.algebra
    x1, x2 = params.x1, params.x2
    UX, UY, UZ = alg.bracket(U, X), alg.bracket(U, Y), alg.bracket(U, Z)
    UXh = split.projector("h") @ UX
    UXp2 = split.projector("p2") @ UX
    ip = alg.inner
    return [-x1 * ip(UXh, UXh), (x2 - x1) * ip(UXp2, UXp2), (x1 - x2) * ip(UY, UX), (x1 - x2) * ip(UY, UY),
            x1 * ip(UX, UZ), (2 * x1 - x2) * ip(UY, UZ), x1 * ip(UZ, UZ)]


def t31_5_check(split: ReductiveSplit, params: MetricParams, X, Y, Z, U) -> ConditionReport:
    alg = split.algebra
    X, Y, Z, U = (alg._vec(v) for v in (X, Y, Z, U))
    if not np.allclose(split.projector("p1") @ U, U, atol=1e-10 * (1 + alg.norm(U))):
        raise ValueError("U must lie in p1")
    terms = t31_5_terms(split, params, X, Y, Z, U)
    size = _xmax(params) * (alg.norm(U) * (alg.norm(X) + alg.norm(Y) + alg.norm(Z))) ** 2
    lhs = float(sum(terms))
    r = lhs / size if size else 0.0
    ok = r <= tolerances().inequality
    return ConditionReport("t31_5", ok, r, None if ok else U, {"terms": terms})


def t31_9n_check(split: ReductiveSplit, params: MetricParams, X, Y) -> ConditionReport:
    """(x2 - x1) |[[Y,X],X]_p2|^2 - x1 |[[Y,X],X]_h|^2 <= 0."""
    alg = split.algebra
    X, Y = alg._vec(X), alg._vec(Y)
    T = alg.bracket(alg.bracket(Y, X), X)
    Th, Tp2 = split.projector("h") @ T, split.projector("p2") @ T
    raw = (params.x2 - params.x1) * alg.inner(Tp2, Tp2) - params.x1 * alg.inner(Th, Th)
    size = _xmax(params) * alg.inner(X, X) ** 2 * alg.inner(Y, Y)
    r = raw / size if size else 0.0
    ok = r <= tolerances().inequality
    details = {"h_norm2": alg.inner(Th, Th), "p2_norm2": alg.inner(Tp2, Tp2), "raw": raw}
    return ConditionReport("t31_9n", ok, float(r), None if ok else (X, Y), details)


def param_range_check(params: MetricParams) -> ConditionReport:
    """x1 < x2 <= 2 x1. The residual max(x1 - x2, x2 - 2 x1)/x1 is reported;
    ``holds`` uses the strict lower bound exactly, so x2 = x1 fails with residual 0."""
    x1, x2 = params.x1, params.x2
    r = max(x1 - x2, x2 - 2 * x1) / x1
    return ConditionReport("param_range", bool(x1 < x2 <= 2 * x1), float(r))


def delta_vector_check(split: ReductiveSplit, params: MetricParams, W, oracle_budget: OracleBudget | None = None
                       ) -> DeltaCertificate:
    return is_delta_vector_numeric(split, params, W, oracle_budget)
