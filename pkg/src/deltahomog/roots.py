"""Root systems of the compact simple Lie algebras in the e_i convention.

All arithmetic is exact: coordinates are :class:`fractions.Fraction` and the
only denominators that occur for roots are 1 and 2 (the half-integer F4
roots).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exceptions import CollinearRoots, NotARoot, UnsupportedRank

FAMILIES = ("A", "B", "C", "D", "G2", "F4")


@dataclass(frozen=True, order=True)
class RootVector:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "RootVector":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)

    def dot(self, other: "RootVector") -> Fraction:
        if len(other.coords) != len(self.coords):
            raise ValueError("ambient dimensions differ")
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def norm2(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_positive(self) -> bool:
        """Lexicographic positivity: the first nonzero coordinate is > 0."""
        for c in self.coords:
            if c:
                return c > 0
        return False

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-a for a in self.coords))

    def scaled(self, k) -> "RootVector":
        k = Fraction(k)
        return RootVector(tuple(k * a for a in self.coords))

    def __repr__(self) -> str:
        return "RootVector(" + ", ".join(str(c) for c in self.coords) + ")"


def _unit(n: int, i: int, value=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(value)
    return v


def _pm_pairs(n: int) -> list[RootVector]:
    """All +-e_i +- e_j, i < j, in R^n."""
    out = []
    for i, j in combinations(range(n), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * n
            v[i], v[j] = Fraction(si), Fraction(sj)
            out.append(RootVector(tuple(v)))
    return out


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: tuple[RootVector, ...]
    long: frozenset[RootVector]
    short: frozenset[RootVector]
    _index: frozenset[RootVector] = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(self.roots))

    def __contains__(self, v: RootVector) -> bool:
        return v in self._index

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def ambient_dim(self) -> int:
        return self.roots[0].ambient_dim

    @property
    def positive(self) -> tuple[RootVector, ...]:
        return tuple(sorted((r for r in self.roots if r.is_positive()), reverse=True))

    @property
    def simple(self) -> tuple[RootVector, ...]:
        pos = self.positive
        sums = {a + b for a, b in combinations(pos, 2)}
        return tuple(r for r in pos if r not in sums)

    def require(self, v: RootVector) -> None:
        if v not in self._index:
            raise NotARoot(f"{v!r} is not a root of {self.family}{self.rank}")

    def cartan_basis(self) -> tuple[RootVector, ...]:
        """A rational basis of span(roots), used as the torus basis.

        Coordinate vectors e_i when the roots span the ambient space, the simple
        roots otherwise (A_l and G2, whose roots lie in the hyperplane sum = 0).
        """
        n = self.ambient_dim
        if n == self.rank:
            return tuple(RootVector(tuple(_unit(n, i))) for i in range(n))
        return self.simple


def _classify(roots: Sequence[RootVector]) -> tuple[frozenset, frozenset]:
    lengths = sorted({r.norm2() for r in roots})
    if len(lengths) == 1:
        return frozenset(roots), frozenset()
    if len(lengths) != 2:
        raise AssertionError(f"root system with lengths {lengths}")
    lo, hi = lengths
    return (frozenset(r for r in roots if r.norm2() == hi),
            frozenset(r for r in roots if r.norm2() == lo))


def _raw_roots(family: str, rank: int) -> list[RootVector]:
    if family == "A":
        n = rank + 1
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = [Fraction(0)] * n
                    v[i], v[j] = Fraction(1), Fraction(-1)
                    out.append(RootVector(tuple(v)))
        return out
    if family == "B":
        out = _pm_pairs(rank)
        for i in range(rank):
            out += [RootVector(tuple(_unit(rank, i, s))) for s in (1, -1)]
        return out
    if family == "C":
        out = _pm_pairs(rank)
        for i in range(rank):
            out += [RootVector(tuple(_unit(rank, i, 2 * s))) for s in (1, -1)]
        return out
    if family == "D":
        return _pm_pairs(rank)
    if family == "G2":
        out = []
        for i in range(3):
            for j in range(3):
                if i != j:
                    v = [Fraction(0)] * 3
                    v[i], v[j] = Fraction(1), Fraction(-1)
                    out.append(RootVector(tuple(v)))
        for j in range(3):
            v = [Fraction(1)] * 3
            v[j] -= 3
            out += [RootVector(tuple(v)), -RootVector(tuple(v))]
        return out
    if family == "F4":
        out = _pm_pairs(4)
        for i in range(4):
            out += [RootVector(tuple(_unit(4, i, s))) for s in (1, -1)]
        half = Fraction(1, 2)
        for signs in product((1, -1), repeat=4):
            out.append(RootVector(tuple(s * half for s in signs)))
        return out
    raise UnsupportedRank(f"unknown family {family!r}")


def build_root_system(family: str, rank: int) -> RootSystem:
    """Return the root system of type ``family`` and ``rank``.

    >>> len(build_root_system("B", 2))
    8
    """
    family = str(family).upper()
    if family == "G":
        family = "G2"
    if family == "F":
        family = "F4"
    if family not in FAMILIES:
        raise UnsupportedRank(f"unknown family {family!r}")
    if not isinstance(rank, int) or rank < 1:
        raise UnsupportedRank(f"rank must be a positive integer, got {rank!r}")
    if family == "G2" and rank != 2:
        raise UnsupportedRank("G2 has rank 2")
    if family == "F4" and rank != 4:
        raise UnsupportedRank("F4 has rank 4")
    if family == "D" and rank < 2:
        raise UnsupportedRank("D_l needs l >= 2 (D_1 has no roots)")
    roots = _raw_roots(family, rank)
    roots = tuple(sorted(set(roots), reverse=True))
    long, short = _classify(roots)
    return RootSystem(family, rank, roots, long, short)


def weyl_reflect(rs: RootSystem, alpha: RootVector, v: RootVector) -> RootVector:
    """Reflect ``v`` in the hyperplane orthogonal to the root ``alpha``."""
    rs.require(alpha)
    k = 2 * v.dot(alpha) / alpha.norm2()
    return v - alpha.scaled(k)


def chain_q(rs: RootSystem, alpha: RootVector, beta: RootVector) -> int:
    """Largest j >= 0 with beta - j*alpha a root."""
    rs.require(alpha)
    rs.require(beta)
    if beta == alpha or beta == -alpha:
        raise CollinearRoots("chain_q needs beta != +-alpha")
    j = 0
    while beta - alpha.scaled(j + 1) in rs:
        j += 1
    return j


def weyl_orbit(rs: RootSystem, v: RootVector, generators: Iterable[RootVector] | None = None) -> frozenset:
    """Orbit of ``v`` under the group generated by the root reflections."""
    gens = tuple(generators) if generators is not None else rs.simple
    seen = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for w in frontier:
            for a in gens:
                r = weyl_reflect(rs, a, w)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return frozenset(seen)
