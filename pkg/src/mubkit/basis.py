"""Orthonormal eigenbases of commuting classes and complete MUB sets.

Each Lagrangian class lifts (phase convention from ``weyl``) to an abelian
matrix group of order M; averaging the group against its characters yields
M rank-1 projectors whose unit vectors form the joint eigenbasis. Complete
sets come from a MUB partition; composite-dimension sets from tensoring
factor sets basis-by-basis.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateProjectorError,
    DimensionMismatchError,
    IncompleteSetError,
    PairingError,
    PhaseLiftError,
)
from .search import find_first_partition, worker_count
from .separability import FactorizationClass, finest_factorization
from .weyl import CommutingClass, PrimeDim, weyl_matrix

ORTHO_TOL = 1e-10
NORM_TOL = 1e-12
DIAG_TOL = 1e-10
UNBIASED_TOL = 1e-9
FULL_CHECK_LIMIT = 10**7  # inner products; beyond this certify by sampling
SAMPLE_PAIRS = 10**4


@dataclass(frozen=True)
class CompositeDims:
    """Shape of a tensor-product system built from prime-power factors."""

    factors: tuple[PrimeDim, ...]

    @property
    def m(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.m
        return out

    @property
    def n(self) -> int | None:
        ns = {f.n for f in self.factors}
        return ns.pop() if len(ns) == 1 else None


class Basis:
    """M orthonormal vectors of length M, rows of ``vectors``.

    Checks orthonormality on construction; when built from a commuting
    class, also checks that every member operator is diagonal in it.
    """

    __slots__ = ("dim", "vectors", "source", "factorization")

    def __init__(
        self,
        vectors: np.ndarray,
        source: CommutingClass | None = None,
        factorization: FactorizationClass | None = None,
        _dims: PrimeDim | None = None,
    ):
        vectors = np.asarray(vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
            raise ValueError("basis must be a square vector stack")
        m = vectors.shape[0]
        gram = vectors.conj() @ vectors.T
        if np.abs(np.diag(gram) - 1.0).max() > NORM_TOL:
            raise ValueError("basis vectors are not normalized")
        off = gram - np.diag(np.diag(gram))
        if np.abs(off).max() > ORTHO_TOL:
            raise ValueError("basis vectors are not orthogonal")
        self.dim = m
        self.vectors = vectors
        self.vectors.setflags(write=False)
        self.source = source
        self.factorization = factorization
        if source is not None and _dims is not None:
            bmat = vectors.T  # columns are the basis kets
            for lbl in source.members:
                rotated = bmat.conj().T @ weyl_matrix(lbl, _dims) @ bmat
                if np.abs(rotated - np.diag(np.diag(rotated))).max() > DIAG_TOL:
                    raise ValueError(f"class member {lbl} is not diagonal in eigenbasis")

    def __repr__(self) -> str:
        src = f", source={self.source.generator_matrix()}" if self.source else ""
        return f"Basis(dim={self.dim}{src})"


@dataclass(frozen=True)
class CertificationRecord:
    max_dev: float
    passed: bool
    sampled: bool = False


@dataclass
class MubSet:
    """A collection of pairwise mutually unbiased bases."""

    dims: PrimeDim | CompositeDims
    bases: list[Basis]
    certified: bool
    max_dev: float

    def __post_init__(self) -> None:
        if len(self.bases) > self.m + 1:
            raise ValueError(f"at most M+1 = {self.m + 1} mutually unbiased bases exist")
        if any(b.dim != self.m for b in self.bases):
            raise DimensionMismatchError("basis dimension does not match the set")

    @property
    def m(self) -> int:
        return self.dims.m

    def is_complete(self) -> bool:
        return isinstance(self.dims, PrimeDim) and len(self.bases) == self.m + 1


def eigenbasis_of_class(cls_: CommutingClass, dims: PrimeDim) -> Basis:
    """Joint eigenbasis of a commuting class via character projectors.

    The lifted group elements are fixed-order products of the canonical
    generators' matrices, which close exactly thanks to the phase
    convention; projector t is (1/M) sum_e w^{-t.e} U_e. Vectors are
    ordered by character label and each gets a deterministic global phase
    (first sizable component real positive).
    """
    d, n, m = dims.d, dims.n, dims.m
    gens = [weyl_matrix(lbl, dims) for lbl in cls_.basis_rows]
    group = [np.eye(m, dtype=complex)]
    for g in gens:
        powers = [np.eye(m, dtype=complex)]
        for _ in range(d - 1):
            powers.append(powers[-1] @ g)
        group = [u @ p for u in group for p in powers]
    stack = np.stack(group)  # index e in generator-major base-d order

    rng = np.random.default_rng(0)
    for _ in range(4):  # spot-check group closure (phase lift sanity)
        i, j = int(rng.integers(m)), int(rng.integers(m))
        di = np.array(np.unravel_index(i, (d,) * n))
        dj = np.array(np.unravel_index(j, (d,) * n))
        k = int(np.ravel_multi_index(tuple((di + dj) % d), (d,) * n))
        if np.abs(stack[i] @ stack[j] - stack[k]).max() > 1e-8:
            raise PhaseLiftError("phase lift failed")

    digits = np.array(list(itertools.product(range(d), repeat=n)))  # (m, n)
    chars = np.exp(-2j * np.pi * ((digits @ digits.T) % d) / d)  # chars[t, e]
    projectors = np.tensordot(chars, stack, axes=(1, 0)) / m

    vectors = np.empty((m, m), dtype=complex)
    for t in range(m):
        proj = projectors[t]
        tr = proj.trace()
        if not (abs(tr - 1.0) <= 1e-8):
            raise DegenerateProjectorError(f"degenerate projector: trace {tr:.3e}")
        col = int(np.argmax(np.linalg.norm(proj, axis=0)))
        v = proj[:, col]
        v = v / np.linalg.norm(v)
        if np.abs(proj - np.outer(v, v.conj())).max() > 1e-8:
            raise DegenerateProjectorError(f"degenerate projector: rank > 1 at label {t}")
        lead = int(np.argmax(np.abs(v) > 1e-8))
        phase = v[lead] / abs(v[lead])
        vectors[t] = v / phase
    return Basis(vectors, source=cls_, factorization=finest_factorization(cls_, dims), _dims=dims)


def certify_unbiased(a: Basis, b: Basis, tol: float = UNBIASED_TOL) -> CertificationRecord:
    """Max deviation of |<a_k|b_m>|^2 from 1/M over all M^2 pairs."""
    if a.dim != b.dim:
        raise DimensionMismatchError("bases live in different dimensions")
    overlap = np.abs(a.vectors.conj() @ b.vectors.T) ** 2
    max_dev = float(np.abs(overlap - 1.0 / a.dim).max())
    return CertificationRecord(max_dev, max_dev < tol)


def _certify_set(bases: list[Basis], tol: float = UNBIASED_TOL) -> tuple[bool, float]:
    worst = 0.0
    for a, b in itertools.combinations(bases, 2):
        rec = certify_unbiased(a, b, tol)
        worst = max(worst, rec.max_dev)
    return worst < tol, worst


def build_complete_mub(dims: PrimeDim, seed: int = 0) -> MubSet:
    """M+1 certified bases from one MUB partition of the Weyl labels."""
    if dims.m > 2**12:
        raise ValueError("composite dimension too large for construction")
    partition = find_first_partition(dims, seed=seed)
    nworkers = worker_count()
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            bases = list(pool.map(lambda c: eigenbasis_of_class(c, dims), partition.classes))
    else:
        bases = [eigenbasis_of_class(cls_, dims) for cls_ in partition.classes]
    certified, max_dev = _certify_set(bases)
    if not certified:
        raise AssertionError(f"constructed set failed unbiasedness: max dev {max_dev:.3e}")
    return MubSet(dims, bases, certified, max_dev)


def mub_from_partition(partition, dims: PrimeDim) -> MubSet:
    """Eigenbases of an explicit partition, certified."""
    bases = [eigenbasis_of_class(cls_, dims) for cls_ in partition.classes]
    certified, max_dev = _certify_set(bases)
    return MubSet(dims, bases, certified, max_dev)


def default_pairing(a: MubSet, b: MubSet, count: int | None = None) -> list[tuple[int, int]]:
    """Match bases of equal factorization class (finest-partition blocks).

    Requires both sets to carry factorization labels over the same particle
    count. Raises PairingError when no complete matching of the requested
    size exists.
    """
    n_a = a.dims.n if isinstance(a.dims, PrimeDim) else a.dims.n
    n_b = b.dims.n if isinstance(b.dims, PrimeDim) else b.dims.n
    if n_a is None or n_b is None or n_a != n_b:
        raise PairingError("factorization pairing needs equal particle counts")
    want = count if count is not None else min(len(a.bases), len(b.bases))
    used: set[int] = set()
    pairing = []
    for i, basis in enumerate(a.bases):
        if len(pairing) == want:
            break
        if basis.factorization is None:
            raise PairingError("left set lacks factorization labels")
        blocks = basis.factorization.partition.blocks
        j = next(
            (
                j
                for j, other in enumerate(b.bases)
                if j not in used
                and other.factorization is not None
                and other.factorization.partition.blocks == blocks
            ),
            None,
        )
        if j is None:
            raise PairingError(
                f"no unused partner with factorization {basis.factorization.partition!r}"
            )
        used.add(j)
        pairing.append((i, j))
    if len(pairing) < want:
        raise PairingError(f"could only match {len(pairing)} of {want} bases")
    return pairing


def tensor_mub(
    a: MubSet,
    b: MubSet,
    pairing: list[tuple[int, int]] | None = None,
    *,
    sample_seed: int = 0,
) -> MubSet:
    """Tensor paired bases into a MUB set on the product space.

    Unbiasedness of the pairs follows from the factors, and is re-verified
    exhaustively, or on a random sample of vector pairs when the full check
    would exceed the inner-product limit.
    """
    if pairing is None:
        pairing = default_pairing(a, b)
    if len(pairing) > min(len(a.bases), len(b.bases)):
        raise PairingError("pairing longer than the smaller set")
    left = [i for i, _ in pairing]
    right = [j for _, j in pairing]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise PairingError("pairing must be injective")
    if not all(0 <= i < len(a.bases) for i in left) or not all(0 <= j < len(b.bases) for j in right):
        raise PairingError("pairing index out of range")

    m = a.m * b.m
    bases = []
    for i, j in pairing:
        va, vb = a.bases[i].vectors, b.bases[j].vectors
        vecs = np.einsum("ik,jl->ijkl", va, vb).reshape(m, m)
        fact = None
        fa, fb = a.bases[i].factorization, b.bases[j].factorization
        if fa is not None and fb is not None and fa.partition.n == fb.partition.n:
            joined = fa.partition.join(fb.partition)
            from .separability import category_name

            fact = FactorizationClass(joined, category_name(joined.size_multiset(), joined.n))
        bases.append(Basis(vecs, factorization=fact))

    n_pairs = len(bases) * (len(bases) - 1) // 2
    exhaustive = n_pairs * m * m <= FULL_CHECK_LIMIT
    if exhaustive:
        certified, max_dev = _certify_set(bases)
    else:
        rng = np.random.default_rng(sample_seed)
        worst = 0.0
        for x, y in itertools.combinations(bases, 2):
            ks = rng.integers(0, m, size=SAMPLE_PAIRS)
            ls = rng.integers(0, m, size=SAMPLE_PAIRS)
            ov = np.abs(np.einsum("ij,ij->i", x.vectors[ks].conj(), y.vectors[ls])) ** 2
            worst = max(worst, float(np.abs(ov - 1.0 / m).max()))
        certified, max_dev = worst < UNBIASED_TOL, worst

    factors_a = a.dims.factors if isinstance(a.dims, CompositeDims) else (a.dims,)
    factors_b = b.dims.factors if isinstance(b.dims, CompositeDims) else (b.dims,)
    return MubSet(CompositeDims(factors_a + factors_b), bases, certified, max_dev)


def require_complete(mub: MubSet) -> PrimeDim:
    if not isinstance(mub.dims, PrimeDim) or len(mub.bases) != mub.m + 1:
        raise IncompleteSetError("full invariant requires M+1 bases")
    return mub.dims
