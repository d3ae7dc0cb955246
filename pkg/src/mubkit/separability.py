"""Exact factorization analysis of commuting classes.

A class factorizes across a particle partition iff its subspace is the
direct sum of its intersections with the blocks' coordinate subspaces; the
check is plain Gaussian elimination over Z_d, so the headline censuses carry
no floating-point tolerance. The finest such partition defines the class's
factorization class, and per-partition category counts give the structure
signature of a complete MUB partition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import zmod
from .weyl import CommutingClass, PrimeDim

Block = frozenset[int]


@dataclass(frozen=True)
class ParticlePartition:
    """Disjoint nonempty blocks of particles {1..N} whose union is {1..N}."""

    blocks: frozenset[Block]

    @classmethod
    def of(cls, *blocks) -> "ParticlePartition":
        return cls(frozenset(frozenset(b) for b in blocks))

    @classmethod
    def trivial(cls, n: int) -> "ParticlePartition":
        return cls.of(range(1, n + 1))

    @classmethod
    def singletons(cls, n: int) -> "ParticlePartition":
        return cls.of(*({i} for i in range(1, n + 1)))

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must cover {1..N}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def sorted_blocks(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(b)) for b in self.blocks)

    def size_multiset(self) -> tuple[int, ...]:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def coarsens(self, other: "ParticlePartition") -> bool:
        """True if every block of `other` sits inside one block of self."""
        return all(any(ob <= sb for sb in self.blocks) for ob in other.blocks)

    def join(self, other: "ParticlePartition") -> "ParticlePartition":
        """Finest partition coarsening both (blockwise connected components)."""
        blocks = [set(b) for b in self.blocks]
        for ob in other.blocks:
            touching = [b for b in blocks if b & ob]
            merged = set(ob).union(*touching)
            blocks = [b for b in blocks if not (b & ob)] + [merged]
        return ParticlePartition.of(*blocks)

    def __repr__(self) -> str:
        inner = "|".join(",".join(map(str, b)) for b in self.sorted_blocks())
        return f"ParticlePartition({inner})"


def all_partitions(n: int) -> list[ParticlePartition]:
    """Every partition of {1..N} (restricted-growth enumeration)."""
    out = []

    def grow(i: int, blocks: list[list[int]]):
        if i > n:
            out.append(ParticlePartition.of(*blocks))
            return
        for b in blocks:
            b.append(i)
            grow(i + 1, blocks)
            b.pop()
        blocks.append([i])
        grow(i + 1, blocks)
        blocks.pop()

    grow(1, [])
    return out


def bipartitions(particles: tuple[int, ...]) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Unordered two-block splits of a particle set."""
    items = sorted(particles)
    first = items[0]
    rest = items[1:]
    splits = []
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            left = frozenset((first, *combo))
            right = frozenset(items) - left
            if right:
                splits.append((left, right))
    return splits


def category_order(n: int) -> list[tuple[int, ...]]:
    """Block-size multisets of N in signature order, most separable first.

    For N=4 this is {1,1,1,1}, {2,1,1}, {2,2}, {3,1}, {4}: fully separable,
    triseparable, biseparable 4x4, biseparable 2x8, nonseparable.
    """
    multisets = set()

    def parts(remaining: int, cap: int, acc: tuple[int, ...]):
        if remaining == 0:
            multisets.add(tuple(sorted(acc, reverse=True)))
            return
        for k in range(min(cap, remaining), 0, -1):
            parts(remaining - k, k, acc + (k,))

    parts(n, n, ())
    return sorted(multisets, key=lambda ms: (-len(ms), ms))


def category_name(multiset: tuple[int, ...], n: int) -> str:
    if len(multiset) == n:
        return "fully-separable"
    if len(multiset) == 1:
        return "nonseparable"
    if n == 3:
        return "biseparable"
    if n == 4:
        if multiset == (2, 1, 1):
            return "triseparable"
        if multiset == (2, 2):
            return "biseparable-4x4"
        if multiset == (3, 1):
            return "biseparable-2x8"
    return "blocks-" + "+".join(map(str, multiset))


@dataclass(frozen=True)
class FactorizationClass:
    """Finest factorizing partition of a class plus its category label."""

    partition: ParticlePartition
    category: str

    @property
    def size_multiset(self) -> tuple[int, ...]:
        return self.partition.size_multiset()


@dataclass(frozen=True)
class StructureSignature:
    """Per-category basis counts of a MUB partition, most separable first."""

    counts: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"

    @classmethod
    def parse(cls, text: str) -> "StructureSignature":
        return cls(tuple(int(x) for x in text.strip().strip("()").split(",")))


def _block_intersection_dim(cls_: CommutingClass, particles: frozenset[int], dims: PrimeDim) -> int:
    """dim(V intersect W_block): N minus the rank of V projected off the block."""
    n = dims.n
    outside = [i for i in range(1, n + 1) if i not in particles]
    cols = [i - 1 for i in outside] + [n + i - 1 for i in outside]
    if not cols:
        return n
    projected = [[row.vector()[c] for c in cols] for row in cls_.basis_rows]
    return n - zmod.rank(projected, dims.d)


def separable_across(cls_: CommutingClass, partition: ParticlePartition, dims: PrimeDim) -> bool:
    """True iff the class subspace is the direct sum of its per-block parts."""
    if partition.n != dims.n:
        raise ValueError("partition does not match particle count")
    total = sum(_block_intersection_dim(cls_, b, dims) for b in partition.blocks)
    return total == dims.n


@lru_cache(maxsize=None)
def finest_factorization(cls_: CommutingClass, dims: PrimeDim) -> FactorizationClass:
    """Finest partition across which the class factorizes.

    Recursive splitting: a block splits whenever some bipartition of it
    preserves the direct-sum rank count. The factorizing partitions are
    closed under common refinement, so greedy splitting lands on the unique
    finest one regardless of order.
    """
    blocks: list[frozenset[int]] = [frozenset(range(1, dims.n + 1))]
    done: list[frozenset[int]] = []
    while blocks:
        block = blocks.pop()
        if len(block) == 1:
            done.append(block)
            continue
        r_block = _block_intersection_dim(cls_, block, dims)
        for left, right in bipartitions(tuple(block)):
            r_left = _block_intersection_dim(cls_, left, dims)
            r_right = _block_intersection_dim(cls_, right, dims)
            if r_left + r_right == r_block:
                blocks.extend((left, right))
                break
        else:
            done.append(block)
    partition = ParticlePartition.of(*done)
    multiset = partition.size_multiset()
    return FactorizationClass(partition, category_name(multiset, dims.n))


def signature_of_classes(classes, dims: PrimeDim) -> StructureSignature:
    """Count classes per factorization category, in canonical order."""
    order = {ms: i for i, ms in enumerate(category_order(dims.n))}
    counts = [0] * len(order)
    for cls_ in classes:
        counts[order[finest_factorization(cls_, dims).size_multiset]] += 1
    return StructureSignature(tuple(counts))


def structure_signature(partition, dims: PrimeDim) -> StructureSignature:
    """Signature of a complete MUB partition (validates coverage first)."""
    classes = partition.classes
    labels = set()
    for cls_ in classes:
        labels.update(cls_.members)
    if len(classes) != dims.m + 1 or len(labels) != dims.d ** (2 * dims.n) - 1:
        raise ValueError("not a complete MUB partition")
    return signature_of_classes(classes, dims)
