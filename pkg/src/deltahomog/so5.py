"""SO(5)/U(2): explicit split, canonical forms, geodesic families and the
spectral test that decides which two-parameter metrics are delta-homogeneous.

Coordinates: elements are coefficient vectors over so_basis(5), i.e. over
F12, F13, F14, F15, F23, F24, F25, F34, F35, F45.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import MatrixAlgebra
from .config import OracleBudget, tolerances
from .exceptions import HypothesisViolation, NotInP, OutOfRange
from .lie import F, exp_matrix, mat_bracket, to_coeffs
from .metric import MetricParams, ReductiveSplit, is_geodesic_vector, metric_inner, project
from .oracle import DeltaCertificate, is_delta_vector_numeric


def fv(i: int, j: int) -> np.ndarray:
    """Coefficient vector of F_{i,j} in so(5)."""
    return to_coeffs(F(5, i, j))


E15 = fv(1, 5)
Q2 = fv(1, 4) - fv(2, 3)      # second q direction, lies in p2
P2_E = fv(1, 2) - fv(3, 4)    # p2 coordinate e
P2_F = Q2                   # p2 coordinate f
H_BASIS = np.array([fv(1, 2) + fv(3, 4), fv(1, 4) + fv(2, 3), fv(1, 3), fv(2, 4)])
P1_BASIS = np.array([fv(1, 5), fv(2, 5), fv(3, 5), fv(4, 5)])
P2_BASIS = np.array([P2_E, P2_F])


@dataclass(frozen=True, eq=False)
class So5Space:
    split: ReductiveSplit
    params: MetricParams

    @property
    def algebra(self) -> MatrixAlgebra:
        return self.split.algebra


def build_so5_u2(params: MetricParams) -> So5Space:
    """u(2) + p1 + p2 inside so(5); orthogonality and invariance are checked by ReductiveSplit."""
    split = ReductiveSplit(MatrixAlgebra(5), H_BASIS, P1_BASIS, P2_BASIS)
    return So5Space(split, params)


def to_matrix(W) -> np.ndarray:
    W = np.asarray(W, dtype=float)
    if W.shape == (5, 5):
        return W
    X = np.zeros((5, 5))
    X[np.triu_indices(5, 1)] = W
    return X - X.T


# -- canonical form --------------------------------------------------------------

def _complex_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal columns (x, y, -Jx, -Jy) with J(v) = (v3, v4, -v1, -v2).

    The frame commutes with J, so its transpose lies in U(2) and sends x to e1.
    """
    J = lambda v: np.array([v[2], v[3], -v[0], -v[1]])
    x = x / np.linalg.norm(x)
    span = [x, J(x)]
    for e in np.eye(4):
        y = e - sum((e @ s) * s for s in span)
        if np.linalg.norm(y) > 0.5:
            y /= np.linalg.norm(y)
            break
    return np.column_stack([x, y, -J(x), -J(y)])


def reduce_to_q(space: So5Space, V) -> tuple[np.ndarray, np.ndarray]:
    """Return (a, Ad(a)V) with a in U(2) and Ad(a)V in q = span{F15, F14 - F23}."""
    split = space.split
    V = split.algebra._vec(V)
    if not split.in_p(V):
        raise NotInP("reduce_to_q needs V in p")
    x = V[[3, 6, 8, 9]]  # F15, F25, F35, F45 coefficients
    a = np.eye(5)
    if np.linalg.norm(x) > 1e-14:
        a[:4, :4] = _complex_frame(x).T
    W = split.algebra.Ad(a, V)
    c1, c2 = W @ P2_E / 2.0, W @ P2_F / 2.0
    t = math.atan2(-c1, c2)
    for s in (t, -t):
        rot = exp_matrix(s * F(5, 2, 4))
        W2 = split.algebra.Ad(rot, W)
        if abs(W2 @ P2_E) <= 1e-10 * (1 + np.linalg.norm(W)):
            return rot @ a, W2
    raise AssertionError("no rotation in exp(t F24) cancels the F12 - F34 coefficient")


# -- geodesic families ------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicClass:
    family: int | None          # 1, 2, 3; None for "not geodesic"; 0 for W = 0 on p
    parameters: dict = field(default_factory=dict)
    residual: float = 0.0

    @property
    def tag(self) -> str:
        if self.family is None:
            return "not geodesic"
        return "trivial" if self.family == 0 else str(self.family)


def _require_generic(params: MetricParams):
    if params.is_normal() or abs(params.x2 - 2 * params.x1) <= tolerances().near_equal * params.x2:
        raise HypothesisViolation("needs x2 != x1 and x2 != 2 x1")


def classify_geodesic(space: So5Space, W) -> GeodesicClass:
    params = space.params
    _require_generic(params)
    split = space.split
    W = split.algebra._vec(W)
    Wp = project(split, W, "p")
    b, c = Wp @ E15, Wp @ Q2 / 2.0
    scale = 1.0 + np.linalg.norm(W)
    if np.linalg.norm(Wp - b * E15 - c * Q2) > 1e-10 * scale:
        raise HypothesisViolation("classify_geodesic needs W_p in q")
    geo = is_geodesic_vector(split, params, W)
    if not geo.is_geodesic:
        return GeodesicClass(None, {}, geo.residual)
    Wh = W - Wp
    b1, b2 = Wh @ H_BASIS[0] / 2.0, Wh @ H_BASIS[1] / 2.0
    b3, b4 = Wh @ H_BASIS[2], Wh @ H_BASIS[3]
    zero = lambda v: abs(v) <= 1e-10 * scale
    if not zero(b) and not zero(c):
        return GeodesicClass(1, {"b": b, "c": c}, geo.residual)
    if zero(b) and not zero(c):
        return GeodesicClass(2, {"d": c, "a1": b1, "a2": b2, "a3": b3}, geo.residual)
    if not zero(b):
        return GeodesicClass(3, {"e": b, "f": b4}, geo.residual)
    return GeodesicClass(0, {}, geo.residual)


def candidate_W(b: float, c: float, params: MetricParams) -> np.ndarray:
    """b F15 + (x2/x1) c F14 + ((x2 - 2 x1)/x1) c F23."""
    x1, x2 = params.x1, params.x2
    return b * fv(1, 5) + (x2 / x1) * c * fv(1, 4) + ((x2 - 2 * x1) / x1) * c * fv(2, 3)


# -- spectra ---------------------------------------------------------------------

def jacobi_eigenvalues(S: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.

    Stops when the off-diagonal Frobenius mass is <= tol * |S|_F.
    """
    A = np.array(S, dtype=float)
    n = A.shape[0]
    scale = max(np.linalg.norm(A), 1e-300)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if math.sqrt(float(np.sum(A[offdiag] ** 2))) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300 + 1e-18 * scale:
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                cs = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * cs
                R = np.eye(n)
                R[p, p] = R[q, q] = cs
                R[p, q], R[q, p] = sn, -sn
                A = R.T @ A @ R
                A[p, q] = A[q, p] = 0.0
    return np.sort(np.diag(A))


@dataclass(frozen=True)
class SpectralSignature:
    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        ev = self.eigenvalues
        if min(ev) < -1e-10 or abs(ev[0]) > 1e-10 * max(1.0, ev[-1]):
            raise ValueError(f"not the spectrum of -W^2 for a 5x5 skew W: {ev}")

    @property
    def small(self) -> float:
        return self.eigenvalues[1]

    @property
    def big(self) -> float:
        return self.eigenvalues[3]


def spectral_signature(W) -> SpectralSignature:
    M = to_matrix(W)
    return SpectralSignature(tuple(float(x) for x in jacobi_eigenvalues(-(M @ M))))


def analytic_spectrum(b: float, c: float, params: MetricParams) -> tuple[float, ...]:
    x1, x2 = params.x1, params.x2
    lo = c * c * (2 * x1 - x2) ** 2 / x1 ** 2
    hi = (b * b * x1 * x1 + c * c * x2 * x2) / x1 ** 2
    lo, hi = sorted((lo, hi))
    return (0.0, lo, lo, hi, hi)


# -- the inequality and the spectral certificate -----------------------------------

def sim_inequality(b: float, c: float, x1: float, x2: float) -> bool:
    """(|c|(2x1 - x2) + sqrt(b^2 x1^2 + c^2 x2^2))^2 x2 < 2 x1^2 (x1 b^2 + 2 x2 c^2)."""
    if b == 0 or x1 == 0 or not 2 * x1 > x2:
        raise HypothesisViolation("needs b != 0, x1 != 0 and 2 x1 > x2")
    lhs = (abs(c) * (2 * x1 - x2) + math.sqrt(b * b * x1 * x1 + c * c * x2 * x2)) ** 2 * x2
    rhs = 2 * x1 * x1 * (x1 * b * b + 2 * x2 * c * c)
    return lhs < rhs


def family_maxima(sig: SpectralSignature, params: MetricParams) -> dict[int, float]:
    """Largest (W~_p, W~_p) over each geodesic family with the given spectrum.

    Family 1 solves for (b~^2, c~^2) with either assignment of the two positive
    eigenvalues; family 2 uses 2|d| <= sqrt(lo) + sqrt(hi); family 3 has
    e^2 in {lo, hi}.
    """
    x1, x2 = params.x1, params.x2
    lo, hi = max(sig.small, 0.0), max(sig.big, 0.0)
    k = (2 * x1 - x2) ** 2 / x1 ** 2
    fam1 = []
    for s_val, b_val in ((lo, hi), (hi, lo)):
        if k == 0.0:
            continue
        c2 = s_val / k
        b2 = b_val - c2 * x2 * x2 / (x1 * x1)
        if b2 >= -1e-12 * max(1.0, hi):
            fam1.append(x1 * max(b2, 0.0) + 2 * x2 * c2)
    d = (math.sqrt(lo) + math.sqrt(hi)) / 2.0
    return {1: max(fam1, default=-math.inf), 2: 2 * x2 * d * d, 3: x1 * hi}


def verify_delta_vector_spectral(space: So5Space, b: float, c: float) -> DeltaCertificate:
    params = space.params
    x1, x2 = params.x1, params.x2
    if not x1 < x2 < 2 * x1:
        raise HypothesisViolation("spectral verification needs x1 < x2 < 2 x1")
    W = candidate_W(b, c, params)
    sig = spectral_signature(W)
    ref = x1 * b * b + 2 * x2 * c * c
    best = family_maxima(sig, params)
    worst = max(best.values())
    excess = worst - ref
    verdict = "confirmed" if excess <= 1e-10 * max(1.0, ref) else "refuted"
    return DeltaCertificate(verdict, excess, ref, None, 1, "spectral",
                            {"eigenvalues": list(sig.eigenvalues), "family_max": {str(k): v for k, v in best.items()}})


def pinch_constant(params, x2: float | None = None) -> float:
    """(x2 / (4 x1))^2; accepts MetricParams or (x1, x2)."""
    if x2 is None:
        x1, x2 = params.x1, params.x2
    else:
        x1 = params
    if not x1 <= x2 <= 2 * x1:
        raise OutOfRange("pinch constant is stated for x1 <= x2 <= 2 x1")
    return (x2 / (4 * x1)) ** 2


# -- the phase diagram --------------------------------------------------------------

DEFAULT_GRID = tuple((b, c) for b, c in product((-2, -1, -0.5, 0.5, 1, 2), repeat=2))
REFUTATION_CANDIDATES = ((1.0, 1.0), (0.5, 1.0), (0.25, 1.0), (1.0, 0.5))


@dataclass(frozen=True)
class PhaseRow:
    ratio: float
    delta_homogeneous: bool
    verdict: str
    method: str
    worst_excess: float
    runtime_ms: float
    witness: list | None = None

    def to_dict(self, witness: bool = True) -> dict:
        d = {"ratio": self.ratio, "verdict": self.delta_homogeneous, "method": self.method,
             "worst_excess": self.worst_excess, "runtime_ms": self.runtime_ms}
        if witness:
            d["certificate"] = self.verdict
            d["witness"] = self.witness
        return d


def _close(r: float, target: float) -> bool:
    return abs(r - target) <= 1e-12 * max(1.0, target)


def verify_theorem_main(ratios, budget: OracleBudget | None = None, grid=DEFAULT_GRID,
                        timer=time.perf_counter) -> list[PhaseRow]:
    """One row per ratio x2/x1 (x1 = 1).

    Ratio 1 and 2 are normal metrics; the open interval is certified
    spectrally on ``grid``; outside, the parameter range condition fails and
    the oracle is asked for an explicit witness.
    """
    budget = budget or OracleBudget()
    rows = []
    for r in ratios:
        r = float(r)
        if not r > 0:
            raise ValueError(f"ratio must be positive, got {r}")
        t0 = timer()
        params = MetricParams(1.0, r)
        if _close(r, 1.0) or _close(r, 2.0):
            method = "boundary/normal (SO(5))" if _close(r, 1.0) else "boundary/normal (SO(6))"
            rows.append(PhaseRow(r, True, "confirmed", method, 0.0, 1e3 * (timer() - t0)))
            continue
        space = build_so5_u2(params)
        if 1.0 < r < 2.0:
            worst = max(verify_delta_vector_spectral(space, b, c).excess for b, c in grid)
            ok = worst <= 1e-10
            rows.append(PhaseRow(r, ok, "confirmed" if ok else "refuted", "spectral", worst, 1e3 * (timer() - t0)))
            continue
        from .conditions import param_range_check
        assert not param_range_check(params).holds
        best = None
        for b, c in REFUTATION_CANDIDATES:
            cert = is_delta_vector_numeric(space.split, params, candidate_W(b, c, params), budget)
            if best is None or cert.excess > best.excess:
                best = cert
            if cert.refuted:
                break
        method = "param_range+oracle" if best.refuted else "param_range"
        witness = None if best.witness is None else np.asarray(best.witness).tolist()
        rows.append(PhaseRow(r, False, "refuted", method, best.excess, 1e3 * (timer() - t0), witness))
    return rows
