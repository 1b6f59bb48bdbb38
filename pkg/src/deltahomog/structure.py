"""Exact structure constants of a compact simple Lie algebra.

The basis is ``t_1..t_r`` (a rational basis of the Cartan subalgebra) followed
by one pair ``(u_a, v_a)`` per positive root ``a``.  Brackets follow

    [h, u_a] = -<a,h> v_a,   [h, v_a] = <a,h> u_a,   [u_a, v_a] = -(4/<a,a>) a
    [u_a, u_b] =  N(a,b) u_{a+b} + N(a,-b) u_{a-b}
    [v_a, v_b] = -N(a,b) u_{a+b} + N(a,-b) u_{a-b}
    [u_a, v_b] =  N(a,b) v_{a+b} - N(a,-b) v_{a-b}
    [v_a, u_b] =  N(a,b) v_{a+b} + N(a,-b) v_{a-b}

with ``u_{-a} = u_a``, ``v_{-a} = -v_a``, ``|N(a,b)| = q+1`` and
``N(-a,-b) = N(a,b)``.

Signs of N are fixed by solving the sign constraints imposed by the Jacobi
identity as a linear system over GF(2) (free bits set to 0, variables ordered
by root order), then the Jacobi identity is re-checked exactly on every basis
triple.  Any valid sign choice gives an isomorphic algebra.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .exceptions import DimensionMismatch, SignConsistencyFailure
from .roots import RootSystem, RootVector, build_root_system, chain_q

Sparse = tuple[tuple[int, Fraction], ...]


def _solve_exact(gram: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# -- sign determination -------------------------------------------------------

class _SignVars:
    """Integer-indexed roots plus one GF(2) variable per orbit
    {(a,b), (b,a), (-a,-b), (-b,-a)} of pairs with a+b a root."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.roots = rs.roots
        pos = {r: i for i, r in enumerate(self.roots)}
        n = len(self.roots)
        self.neg = [pos[-r] for r in self.roots]
        self.add: dict[tuple[int, int], int] = {}
        for i in range(n):
            for j in range(n):
                k = pos.get(self.roots[i] + self.roots[j])
                if k is not None:
                    self.add[(i, j)] = k
        self.cartan_terms = []
        for r in self.roots:
            n2 = r.norm2()
            self.cartan_terms.append([(c_i, 8 * c / n2) for c_i, c in enumerate(r.coords) if c])
        self.index: dict[tuple[int, int], int] = {}
        self.sign_mag: dict[tuple[int, int], int] = {}
        neg = self.neg
        reps = sorted({min((i, j), (neg[i], neg[j]), (j, i), (neg[j], neg[i]), key=self._key)
                       for (i, j) in self.add}, key=self._key)
        for k, (i, j) in enumerate(reps):
            m = chain_q(rs, self.roots[i], self.roots[j]) + 1
            for pair, s in (((i, j), 1), ((neg[i], neg[j]), 1), ((j, i), -1), ((neg[j], neg[i]), -1)):
                self.index[pair] = k
                self.sign_mag[pair] = s * m
        self.count = len(reps)

    def _key(self, pair):
        # descending root order
        return (tuple(-c for c in self.roots[pair[0]].coords), tuple(-c for c in self.roots[pair[1]].coords))

    def n_values(self, bits: list[int]) -> dict[tuple[RootVector, RootVector], int]:
        return {(self.roots[i], self.roots[j]): self.sign_mag[(i, j)] * (-1 if bits[k] else 1)
                for (i, j), k in self.index.items()}


def _sym_basic(sv: _SignVars, ka, kb):
    """Brackets of the complex basis K_i (= i e_i in t_C) and X_a = u_a + i v_a."""
    if ka[0] == "K":
        if kb[0] == "K":
            return ()
        return ((kb, -sv.roots[kb[1]].coords[ka[1]], 0),)
    if kb[0] == "K":
        return ((ka, sv.roots[ka[1]].coords[kb[1]], 0),)
    a, b = ka[1], kb[1]
    if b == sv.neg[a]:
        return tuple((("K", i), c, 0) for i, c in sv.cartan_terms[a])
    k = sv.add.get((a, b))
    if k is not None:
        return ((("X", k), 2 * sv.sign_mag[(a, b)], 1 << sv.index[(a, b)]),)
    return ()


def _sym_bracket(sv, x: dict, y: dict) -> dict:
    out: dict = {}
    for ka, ta in x.items():
        for kb, tb in y.items():
            for kc, coef, par in _sym_basic(sv, ka, kb):
                slot = out.setdefault(kc, {})
                for pa, ca in ta.items():
                    for pb, cb in tb.items():
                        p = pa ^ pb ^ par
                        slot[p] = slot.get(p, 0) + ca * cb * coef
    return out


def _sym_add(*elems) -> dict:
    out: dict = {}
    for e in elems:
        for k, terms in e.items():
            slot = out.setdefault(k, {})
            for p, c in terms.items():
                slot[p] = slot.get(p, 0) + c
    return out


def _equations(terms: dict) -> list[tuple[int, int]]:
    """XOR constraints forcing sum_k c_k (-1)^{x.P_k} = 0; unique pattern required."""
    items = [(p, c) for p, c in terms.items() if c != 0]
    if not items:
        return []
    # constant term (parity 0) first; its sign, or else the first sign, is pinned to +1
    items.sort(key=lambda t: t[0])
    patterns = []
    for signs in product((1, -1), repeat=len(items) - 1):
        full = (1,) + signs
        if sum(s * c for s, (_, c) in zip(full, items)) == 0:
            patterns.append(full)
    if not patterns:
        raise SignConsistencyFailure("structure-constant magnitudes admit no Jacobi-consistent signs")
    if len(patterns) > 1:
        return []
    pat = patterns[0]
    ref_p = items[0][0]
    return [(p ^ ref_p, 0 if s == pat[0] else 1) for (p, _), s in zip(items[1:], pat[1:])]


def _gf2_solve(rows: list[tuple[int, int]], nvars: int) -> list[int]:
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            lead = mask.bit_length() - 1
            if lead in pivots:
                pm, pr = pivots[lead]
                mask ^= pm
                rhs ^= pr
            else:
                pivots[lead] = (mask, rhs)
                break
        else:
            if rhs:
                raise SignConsistencyFailure("contradictory sign constraints")
    x = [0] * nvars
    for lead in sorted(pivots):
        mask, rhs = pivots[lead]
        val = rhs
        rest = mask & ~(1 << lead)
        while rest:
            b = rest.bit_length() - 1
            val ^= x[b]
            rest &= ~(1 << b)
        x[lead] = val
    return x


def _solve_signs(rs: RootSystem) -> dict[tuple[RootVector, RootVector], int]:
    sv = _SignVars(rs)
    rows: list[tuple[int, int]] = []
    n = len(sv.roots)
    X = [{("X", i): {0: Fraction(1)}} for i in range(n)]
    linked = set(sv.add) | {(i, sv.neg[i]) for i in range(n)}
    for a, b, c in combinations(range(n), 3):
        if not ((a, b) in linked or (b, c) in linked or (a, c) in linked):
            continue
        xa, xb, xc = X[a], X[b], X[c]
        jac = _sym_add(_sym_bracket(sv, _sym_bracket(sv, xa, xb), xc),
                       _sym_bracket(sv, _sym_bracket(sv, xb, xc), xa),
                       _sym_bracket(sv, _sym_bracket(sv, xc, xa), xb))
        for terms in jac.values():
            rows.extend(_equations(terms))
    return sv.n_values(_gf2_solve(rows, sv.count))


# -- the real compact table ---------------------------------------------------

@dataclass(frozen=True)
class BracketTable:
    root_system: RootSystem
    cartan: tuple[RootVector, ...]
    positive: tuple[RootVector, ...]
    labels: tuple[str, ...]
    constants: dict[tuple[int, int], Sparse] = field(repr=False)
    n_values: dict[tuple[RootVector, RootVector], int] = field(repr=False)
    scale: Fraction = Fraction(1)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def u(self, alpha: RootVector) -> int:
        return self._pos_index(alpha)[0]

    def v(self, alpha: RootVector) -> int:
        return self._pos_index(alpha)[1]

    def _pos_index(self, alpha):
        a = alpha if alpha.is_positive() else -alpha
        k = self.positive.index(a)
        return self.rank + 2 * k, self.rank + 2 * k + 1

    def N(self, alpha: RootVector, beta: RootVector) -> int:
        return self.n_values.get((alpha, beta), 0)

    def basis_vector(self, i: int) -> list[Fraction]:
        e = [Fraction(0)] * self.dim
        e[i] = Fraction(1)
        return e

    def root_element(self, alpha: RootVector, kind: str = "u") -> list[Fraction]:
        """u_alpha or v_alpha as a coefficient vector, honouring u_{-a}=u_a, v_{-a}=-v_a."""
        iu, iv = self._pos_index(alpha)
        e = [Fraction(0)] * self.dim
        if kind == "u":
            e[iu] = Fraction(1)
        else:
            e[iv] = Fraction(1) if alpha.is_positive() else Fraction(-1)
        return e

    def cartan_element(self, h: RootVector) -> list[Fraction]:
        """Coefficients of the torus vector ``h`` (ambient coordinates) in t-basis."""
        return _cartan_coords(self.cartan, h) + [Fraction(0)] * (self.dim - self.rank)

    def gram(self) -> list[list[Fraction]]:
        """Exact Gram matrix of the invariant inner product on the basis."""
        n = self.dim
        g = [[Fraction(0)] * n for _ in range(n)]
        for i, bi in enumerate(self.cartan):
            for j, bj in enumerate(self.cartan):
                g[i][j] = self.scale * bi.dot(bj)
        for k, a in enumerate(self.positive):
            w = self.scale * Fraction(4) / a.norm2()
            i = self.rank + 2 * k
            g[i][i] = w
            g[i + 1][i + 1] = w
        return g

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        g = self.gram()
        return sum((Fraction(x[i]) * g[i][j] * Fraction(y[j])
                    for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]), Fraction(0))

    @property
    def family(self) -> str:
        return self.root_system.family

    def structure_tensor(self) -> np.ndarray:
        """Float array c[i, j, k] with [e_i, e_j] = sum_k c[i, j, k] e_k."""
        c = np.zeros((self.dim,) * 3)
        for (i, j), terms in self.constants.items():
            for k, val in terms:
                c[i, j, k] = float(val)
        return c

    def to_dict(self) -> dict:
        rows = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                terms = self.constants.get((i, j))
                if terms:
                    dense = [Fraction(0)] * self.dim
                    for k, val in terms:
                        dense[k] = val
                    rows.append([i, j, [_enc(x) for x in dense]])
        return {
            "family": self.family,
            "rank": self.root_system.rank,
            "roots": [[_enc(c) for c in r.coords] for r in self.root_system.roots],
            "basis": list(self.labels),
            "cartan_basis": [[_enc(c) for c in b.coords] for b in self.cartan],
            "scale": _enc(self.scale),
            "constants": rows,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "BracketTable":
        rs = build_root_system(doc["family"], int(doc["rank"]))
        stored = {RootVector(tuple(_dec(c) for c in r)) for r in doc["roots"]}
        if stored != set(rs.roots):
            raise ValueError("root list in document does not match the family")
        cartan = tuple(RootVector(tuple(_dec(c) for c in b)) for b in doc["cartan_basis"])
        if cartan != rs.cartan_basis():
            raise ValueError("cartan basis in document does not match the family")
        constants: dict[tuple[int, int], Sparse] = {}
        for i, j, dense in doc["constants"]:
            terms = tuple((k, _dec(x)) for k, x in enumerate(dense) if _dec(x) != 0)
            constants[(i, j)] = terms
            constants[(j, i)] = tuple((k, -x) for k, x in terms)
        positive = rs.positive
        n_values = _n_from_constants(rs, positive, len(cartan), constants)
        return cls(rs, cartan, positive, tuple(doc["basis"]), constants, n_values, _dec(doc.get("scale", 1)))

    @classmethod
    def from_json(cls, text: str) -> "BracketTable":
        return cls.from_dict(json.loads(text))


def root_system_to_dict(rs: RootSystem) -> dict:
    return {
        "family": rs.family,
        "rank": rs.rank,
        "roots": [[_enc(c) for c in r.coords] for r in rs.roots],
        "long": [[_enc(c) for c in r.coords] for r in sorted(rs.long, reverse=True)],
        "short": [[_enc(c) for c in r.coords] for r in sorted(rs.short, reverse=True)],
    }


def root_system_from_dict(doc: dict) -> RootSystem:
    rs = build_root_system(doc["family"], int(doc["rank"]))
    stored = {RootVector(tuple(_dec(c) for c in r)) for r in doc["roots"]}
    if stored != set(rs.roots):
        raise ValueError("root list in document does not match the family")
    return rs


def _enc(x: Fraction):
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    if x.denominator == 2:
        return float(x)
    return f"{x.numerator}/{x.denominator}"


def _dec(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(2)
    return Fraction(x)


def _cartan_coords(cartan: Sequence[RootVector], h: RootVector) -> list[Fraction]:
    gram = [[bi.dot(bj) for bj in cartan] for bi in cartan]
    return _solve_exact(gram, [b.dot(h) for b in cartan])


def _signed_root(positive_index, gamma: RootVector, kind: str):
    """(basis index, sign) of u_gamma / v_gamma for any root gamma."""
    pos = gamma.is_positive()
    iu, iv = positive_index[gamma if pos else -gamma]
    if kind == "u":
        return iu, 1
    return iv, 1 if pos else -1


def _compute_constants(rs, cartan, positive, nval) -> dict[tuple[int, int], Sparse]:
    r = len(cartan)
    pidx = {a: (r + 2 * k, r + 2 * k + 1) for k, a in enumerate(positive)}
    table: dict[tuple[int, int], dict[int, Fraction]] = {}

    def put(i, j, k, val):
        if val:
            d = table.setdefault((i, j), {})
            d[k] = d.get(k, 0) + Fraction(val)

    for i, b in enumerate(cartan):
        for a in positive:
            iu, iv = pidx[a]
            ab = a.dot(b)
            put(i, iu, iv, -ab)
            put(i, iv, iu, ab)
    for a in positive:
        iu, iv = pidx[a]
        for k, c in enumerate(_cartan_coords(cartan, a)):
            put(iu, iv, k, -Fraction(4) / a.norm2() * c)
    for a, b in combinations(positive, 2):
        nab = nval.get((a, b), 0)
        namb = nval.get((a, -b), 0)
        iua, iva = pidx[a]
        iub, ivb = pidx[b]
        for (x, y, coef_plus, kind_plus, coef_minus, kind_minus) in (
                (iua, iub, nab, "u", namb, "u"),
                (iva, ivb, -nab, "u", namb, "u"),
                (iua, ivb, nab, "v", -namb, "v"),
                (iva, iub, nab, "v", namb, "v")):
            if coef_plus:
                k, s = _signed_root(pidx, a + b, kind_plus)
                put(x, y, k, s * coef_plus)
            if coef_minus:
                k, s = _signed_root(pidx, a - b, kind_minus)
                put(x, y, k, s * coef_minus)
    out: dict[tuple[int, int], Sparse] = {}
    for (i, j), d in table.items():
        terms = tuple(sorted((k, v) for k, v in d.items() if v))
        if terms:
            out[(i, j)] = terms
            out[(j, i)] = tuple((k, -v) for k, v in terms)
    return out


def _n_from_constants(rs, positive, r, constants) -> dict:
    """Recover N(a,b) from the brackets, for documents loaded from JSON."""
    pidx = {a: (r + 2 * k, r + 2 * k + 1) for k, a in enumerate(positive)}
    return {(a, b): _n_lookup(rs, pidx, constants, a, b)
            for a in rs.roots for b in rs.roots if a + b in rs}


def _n_lookup(rs, pidx, constants, a, b) -> int:
    # [X_a, X_b] = 2 N(a,b) X_{a+b} with X_a = u_a + i v_a; read the u-part.
    def elem(root):
        iu, iv = pidx[root if root.is_positive() else -root]
        s = 1 if root.is_positive() else -1
        return {iu: Fraction(1)}, {iv: Fraction(s)}

    ua, va = elem(a)
    ub, vb = elem(b)

    def br(x, y):
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, c in constants.get((i, j), ()):
                    out[k] = out.get(k, 0) + ci * cj * c
        return out

    # real part of [u_a + i v_a, u_b + i v_b] = [u_a,u_b] - [v_a,v_b]
    re = br(ua, ub)
    for k, c in br(va, vb).items():
        re[k] = re.get(k, 0) - c
    g = a + b
    kg = pidx[g if g.is_positive() else -g][0]
    return int(re.get(kg, 0) / 2)


def bracket(table: BracketTable, x: Sequence, y: Sequence) -> list[Fraction]:
    """Exact bilinear bracket of two coefficient vectors."""
    if len(x) != table.dim or len(y) != table.dim:
        raise DimensionMismatch(f"expected vectors of length {table.dim}")
    out = [Fraction(0)] * table.dim
    xs = [(i, Fraction(c)) for i, c in enumerate(x) if c]
    ys = [(j, Fraction(c)) for j, c in enumerate(y) if c]
    for i, ci in xs:
        for j, cj in ys:
            for k, c in table.constants.get((i, j), ()):
                out[k] += ci * cj * c
    return out


def _sparse_bracket(constants, x: dict, y: dict) -> dict:
    out: dict[int, Fraction] = {}
    for i, ci in x.items():
        for j, cj in y.items():
            for k, c in constants.get((i, j), ()):
                out[k] = out.get(k, 0) + ci * cj * c
    return {k: v for k, v in out.items() if v}


def jacobi_defects(table: BracketTable) -> list[tuple[int, int, int]]:
    """Basis triples (i<j<k) on which the Jacobi identity fails (exactly)."""
    bad = []
    c = table.constants
    e = [{i: Fraction(1)} for i in range(table.dim)]
    for i, j, k in combinations(range(table.dim), 3):
        s: dict[int, Fraction] = {}
        for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
            for key, val in _sparse_bracket(c, _sparse_bracket(c, e[a], e[b]), e[d]).items():
                s[key] = s.get(key, 0) + val
        if any(s.values()):
            bad.append((i, j, k))
    return bad


def build_bracket_table(rs: RootSystem, scale=1) -> BracketTable:
    """Structure constants for ``rs``; raises SignConsistencyFailure on a failed Jacobi check."""
    cartan = rs.cartan_basis()
    positive = rs.positive
    nval = _solve_signs(rs)
    constants = _compute_constants(rs, cartan, positive, nval)
    labels = tuple([f"t{i + 1}" for i in range(len(cartan))]
                   + [f"{k}[{','.join(str(c) for c in a.coords)}]" for a in positive for k in ("u", "v")])
    table = BracketTable(rs, cartan, positive, labels, constants, nval, Fraction(scale))
    bad = jacobi_defects(table)
    if bad:
        raise SignConsistencyFailure(f"Jacobi identity fails on {len(bad)} basis triples, e.g. {bad[0]}")
    return table
