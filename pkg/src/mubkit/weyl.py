"""Generalized Pauli (Weyl-Heisenberg) operators in symplectic coordinates.

An operator on N qudits of prime dimension d is tracked, up to phase, by a
vector in Z_d^{2N}: the X-exponents of every particle followed by the
Z-exponents (particle-major column order). Two operators commute iff the
symplectic form of their labels vanishes, and the maximal sets of commuting
operators are exactly the N-dimensional isotropic (Lagrangian) subspaces.

Matrix representatives fix the phase so every Lagrangian lifts to a genuine
abelian group of order d^N: Hermitian i^{ab} X^a Z^b factors for d = 2, and
order-d factors w^{(a b)/2} X^a Z^b (with 1/2 the mod-d inverse) for odd d.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import zmod
from .errors import DimensionMismatchError, EnumerationCapError

MAX_M = 2**20
ENUMERATION_M_CAP = 2**12
ENUMERATION_CLASS_CAP = 10**6

_PAULI_LABELS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _is_prime(d: int) -> bool:
    if d < 2:
        return False
    for p in range(2, math.isqrt(d) + 1):
        if d % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeDim:
    """System shape: N particles of prime dimension d, composite dimension M = d^N."""

    d: int
    n: int

    def __post_init__(self) -> None:
        if not _is_prime(self.d):
            raise ValueError(f"d = {self.d} is not prime")
        if self.n < 1:
            raise ValueError("particle count must be >= 1")
        if self.d**self.n > MAX_M:
            raise ValueError(f"composite dimension {self.d}**{self.n} exceeds cap {MAX_M}")

    @property
    def m(self) -> int:
        return self.d**self.n

    def __repr__(self) -> str:
        return f"PrimeDim(d={self.d}, n={self.n})"


@dataclass(frozen=True)
class WeylLabel:
    """Phase-free name of a Weyl operator: X-part a and Z-part b, entries mod d."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def is_identity(self) -> bool:
        return not any(self.a) and not any(self.b)

    @classmethod
    def make(cls, a: Sequence[int], b: Sequence[int], d: int) -> "WeylLabel":
        if len(a) != len(b):
            raise DimensionMismatchError("incompatible labels: X and Z parts differ in length")
        return cls(tuple(x % d for x in a), tuple(x % d for x in b))

    @classmethod
    def from_vector(cls, vec: Sequence[int], n: int) -> "WeylLabel":
        return cls(tuple(vec[:n]), tuple(vec[n:]))

    @classmethod
    def from_pauli(cls, pauli: str) -> "WeylLabel":
        """Qubit-only convenience: build a label from a string like "XYI"."""
        try:
            parts = [_PAULI_LABELS[c] for c in pauli.upper()]
        except KeyError as exc:
            raise ValueError(f"not a Pauli string: {pauli!r}") from exc
        return cls(tuple(p[0] for p in parts), tuple(p[1] for p in parts))

    def vector(self) -> tuple[int, ...]:
        return self.a + self.b

    def __repr__(self) -> str:
        return f"WeylLabel(a={self.a}, b={self.b})"


def symplectic_form(u: WeylLabel, v: WeylLabel, d: int) -> int:
    """(u.a . v.b - v.a . u.b) mod d; zero iff the operators commute."""
    if u.n != v.n:
        raise DimensionMismatchError("incompatible labels: different particle counts")
    total = 0
    for ua, ub, va, vb in zip(u.a, u.b, v.a, v.b):
        total += ua * vb - va * ub
    return total % d


def commutes(u: WeylLabel, v: WeylLabel, d: int) -> bool:
    return symplectic_form(u, v, d) == 0


class CommutingClass:
    """A maximal commuting (Lagrangian) class of Weyl operators.

    Stored as the unique reduced row-echelon basis of the corresponding
    N-dimensional isotropic subspace of Z_d^{2N}, so equal subspaces
    compare and hash equal.
    """

    __slots__ = ("dims", "basis_rows", "_members")

    def __init__(self, rows: Iterable[WeylLabel | Sequence[int]], dims: PrimeDim):
        vecs = []
        for r in rows:
            vec = r.vector() if isinstance(r, WeylLabel) else tuple(r)
            if len(vec) != 2 * dims.n:
                raise DimensionMismatchError("incompatible labels: wrong coordinate length")
            vecs.append(vec)
        canon = zmod.rref(vecs, dims.d)
        if len(canon) != dims.n:
            raise ValueError(f"class needs {dims.n} independent generators, got rank {len(canon)}")
        labels = tuple(WeylLabel.from_vector(v, dims.n) for v in canon)
        for u, v in itertools.combinations(labels, 2):
            if symplectic_form(u, v, dims.d) != 0:
                raise ValueError("generators do not commute: subspace is not isotropic")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "basis_rows", labels)
        object.__setattr__(self, "_members", None)

    def __setattr__(self, name, value):
        raise AttributeError("CommutingClass is immutable")

    @property
    def members(self) -> tuple[WeylLabel, ...]:
        """All d^N - 1 nonzero labels of the class, in lexicographic order."""
        if self._members is None:
            rows = [lbl.vector() for lbl in self.basis_rows]
            vecs = sorted(set(zmod.span_nonzero(rows, self.dims.d)))
            object.__setattr__(
                self, "_members", tuple(WeylLabel.from_vector(v, self.dims.n) for v in vecs)
            )
        return self._members

    def generator_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(lbl.vector() for lbl in self.basis_rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CommutingClass)
            and self.dims == other.dims
            and self.basis_rows == other.basis_rows
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.basis_rows))

    def __lt__(self, other: "CommutingClass") -> bool:
        return self.generator_matrix() < other.generator_matrix()

    def __repr__(self) -> str:
        return f"CommutingClass({self.generator_matrix()}, d={self.dims.d})"


def lagrangian_count(dims: PrimeDim) -> int:
    """prod_{i=1..N} (d^i + 1), the number of maximal isotropic subspaces."""
    return math.prod(dims.d**i + 1 for i in range(1, dims.n + 1))


@lru_cache(maxsize=None)
def enumerate_lagrangians(dims: PrimeDim) -> tuple[CommutingClass, ...]:
    """Every maximal commuting class, canonical, deterministically ordered.

    Builds isotropic subspaces level by level: each dimension-k subspace is
    extended by the projective vectors of its symplectic perp, with
    canonical-form dedup at every level. Refuses instances beyond the
    enumeration caps.
    """
    if dims.m > ENUMERATION_M_CAP or lagrangian_count(dims) > ENUMERATION_CLASS_CAP:
        raise EnumerationCapError("enumeration too large; use sampled mode")
    d, n = dims.d, dims.n
    width = 2 * n
    points = [
        v
        for v in itertools.product(range(d), repeat=width)
        if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1
    ]
    level: set[tuple[zmod.Row, ...]] = {(p,) for p in points}
    for _ in range(n - 1):
        nxt: set[tuple[zmod.Row, ...]] = set()
        for rows in level:
            # symplectic perp: forms sigma(u, .) = dot((-u.b, u.a), .)
            forms = [tuple((-v) % d for v in u[n:]) + u[:n] for u in rows]
            perp = zmod.nullspace(forms, d, width)
            for w in zmod.span_nonzero(perp, d):
                if w[next(i for i, x in enumerate(w) if x)] != 1:
                    continue  # one representative per projective point
                ext = zmod.rref_extend(rows, w, d)
                if ext is not None:
                    nxt.add(ext)
        level = nxt
    classes = sorted(CommutingClass(rows, dims) for rows in (tuple(r) for r in level))
    assert len(classes) == lagrangian_count(dims)
    return tuple(classes)


@lru_cache(maxsize=None)
def _single_qudit_ops(d: int) -> tuple[np.ndarray, np.ndarray]:
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)  # X|k> = |k+1 mod d>
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))  # Z|k> = w^k |k>
    return shift, clock


def weyl_matrix(label: WeylLabel, dims: PrimeDim) -> np.ndarray:
    """Concrete M x M unitary for a label, in the canonical phase convention.

    For d = 2 the representative is Hermitian (i^{ab} X^a Z^b per particle);
    for odd d it has order d. Either way representatives of commuting labels
    generated by a class's canonical rows multiply without extra phases.
    """
    if label.n != dims.n:
        raise DimensionMismatchError("incompatible labels: wrong particle count")
    d = dims.d
    shift, clock = _single_qudit_ops(d)
    out = np.ones((1, 1), dtype=complex)
    for a, b in zip(label.a, label.b):
        factor = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        if d == 2:
            factor = (1j ** (a * b)) * factor
        else:
            half = (d + 1) // 2  # inverse of 2 mod d
            factor = np.exp(2j * np.pi * ((half * a * b) % d) / d) * factor
        out = np.kron(out, factor)
    return out
