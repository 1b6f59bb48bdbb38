"""Realise an abstract B_l bracket table inside so(2l+1) and compare.

The torus vector e_i goes to F_{2i-1,2i}. Each root plane is found as a common
null space of ad(t)^2 + alpha(t)^2, simple-root vectors are fixed by a
normalisation, and the rest follow from brackets.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exceptions import UnsupportedRank
from .lie import F, from_coeffs, mat_bracket, so_basis, to_coeffs, trace_product
from .roots import RootVector
from .structure import BracketTable


@dataclass(frozen=True)
class EmbeddingReport:
    images: tuple[np.ndarray, ...]   # image of each table basis vector
    bracket_deviation: float         # max |phi[a,b] - [phi a, phi b]| / max |[phi a, phi b]|
    gram_deviation: float            # max |<phi a, phi b> - kappa g_ab| / max |kappa g_ab|
    scale: float


def _ad_matrix(X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    return np.column_stack([to_coeffs(mat_bracket(X, E)) for E in so_basis(n)])


def _root_plane(torus_ads: list[np.ndarray], alpha: RootVector) -> np.ndarray:
    """Orthonormal coordinate basis (columns) of the real root plane V_alpha."""
    a = [float(c) for c in alpha.coords]
    dim = torus_ads[0].shape[0]
    blocks = [T @ T + a[i] ** 2 * np.eye(dim) for i, T in enumerate(torus_ads)]
    for i, j in combinations(range(len(a)), 2):
        S = torus_ads[i] + torus_ads[j]
        blocks.append(S @ S + (a[i] + a[j]) ** 2 * np.eye(dim))
    _, s, vt = np.linalg.svd(np.vstack(blocks))
    null = vt[np.sum(s > 1e-9):]
    if null.shape[0] != 2:
        raise AssertionError(f"root plane for {alpha!r} has dimension {null.shape[0]}")
    return null.T


def embed_b_table(table: BracketTable) -> EmbeddingReport:
    if table.family != "B":
        raise UnsupportedRank("only B_l tables embed into the so(2l+1) matrix model")
    l = table.rank
    n = 2 * l + 1
    rs = table.root_system
    torus = [F(n, 2 * i + 1, 2 * i + 2) for i in range(l)]
    ads = [_ad_matrix(T) for T in torus]
    img: dict[int, np.ndarray] = {i: torus[i] for i in range(l)}

    def v_from_u(alpha: RootVector, u: np.ndarray) -> np.ndarray:
        # [h, u] = -alpha(h) v for any torus h with alpha(h) != 0
        k = next(i for i, c in enumerate(alpha.coords) if c)
        return -mat_bracket(torus[k], u) / float(alpha.coords[k])

    simple = set(rs.simple)
    done: list[RootVector] = []
    pending = list(rs.positive)
    while pending:
        for gamma in pending:
            if gamma in simple:
                basis = _root_plane(ads, gamma)
                u = from_coeffs(basis[:, 0], n) * (2.0 / np.sqrt(float(gamma.norm2())))
                break
            split = next(((a, gamma - a) for a in simple if a in done and gamma - a in done), None)
            if split is not None:
                a, b = split
                basis = _root_plane(ads, gamma)
                w = to_coeffs(mat_bracket(img[table.u(a)], img[table.u(b)]))
                u = from_coeffs(basis @ (basis.T @ w), n) / table.N(a, b)
                break
        else:
            raise AssertionError("positive roots not reachable from simple roots")
        img[table.u(gamma)] = u
        img[table.v(gamma)] = v_from_u(gamma, u)
        done.append(gamma)
        pending.remove(gamma)

    images = tuple(img[i] for i in range(table.dim))
    c = table.structure_tensor()
    worst, size = 0.0, 0.0
    for i in range(table.dim):
        for j in range(i + 1, table.dim):
            actual = mat_bracket(images[i], images[j])
            predicted = np.einsum("k,kab->ab", c[i, j], np.array(images))
            worst = max(worst, float(np.max(np.abs(actual - predicted))))
            size = max(size, float(np.max(np.abs(actual))))
    g = np.array(table.gram(), dtype=float)
    tg = np.array([[trace_product(a, b) for b in images] for a in images])
    gram_dev = float(np.max(np.abs(tg - g)) / np.max(np.abs(g)))
    return EmbeddingReport(images, worst / size, gram_dev, float(table.scale))
