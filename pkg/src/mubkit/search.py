"""Partitioning the nonzero Weyl labels into M+1 commuting classes.

A complete MUB set corresponds to an exact cover of the projective points
of Z_d^{2N} by Lagrangian subspaces. Small cases ((2,2), (2,3), (3,2)) are
enumerated exhaustively; larger ones are probed by seeded randomized
restarts, optionally constrained to a target structure signature through
per-category quotas inside the kernel.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import cover, zmod
from .errors import BudgetRefusalError
from .separability import StructureSignature, category_order, finest_factorization, signature_of_classes
from .weyl import CommutingClass, PrimeDim, enumerate_lagrangians, symplectic_form

EXHAUSTIVE_CLASS_LIMIT = 200
DEFAULT_RESTART_BUDGET = 10**7
DEFAULT_RESTARTS = 100


def worker_count() -> int:
    """Parallelism cap from MUBKIT_THREADS (default 1: fully serial)."""
    try:
        return max(1, int(os.environ.get("MUBKIT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class MubPartition:
    """M+1 pairwise-disjoint commuting classes covering all nonzero labels."""

    classes: tuple[CommutingClass, ...]
    dims: PrimeDim

    @property
    def signature(self) -> StructureSignature:
        return signature_of_classes(self.classes, self.dims)

    def __len__(self) -> int:
        return len(self.classes)


@dataclass
class ValidationResult:
    ok: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_partition(partition: MubPartition, dims: PrimeDim) -> ValidationResult:
    """Disjointness, coverage, and per-class isotropy/size checks."""
    reasons = []
    m = dims.m
    if len(partition.classes) != m + 1:
        reasons.append(f"expected {m + 1} classes, got {len(partition.classes)}")
    seen: dict = {}
    for idx, cls_ in enumerate(partition.classes):
        if len(cls_.basis_rows) != dims.n:
            reasons.append(f"class {idx}: wrong rank")
        members = cls_.members
        if len(members) != m - 1:
            reasons.append(f"class {idx}: has {len(members)} members, expected {m - 1}")
        for u, v in itertools.combinations(cls_.basis_rows, 2):
            if symplectic_form(u, v, dims.d) != 0:
                reasons.append(f"class {idx}: generators do not commute")
                break
        for lbl in members:
            if lbl in seen:
                reasons.append(f"classes {seen[lbl]} and {idx} overlap")
                break
            seen[lbl] = idx
    expected = dims.d ** (2 * dims.n) - 1
    if len(seen) != expected and not any("overlap" in r for r in reasons):
        reasons.append(f"covers {len(seen)} of {expected} nonzero labels")
    return ValidationResult(not reasons, reasons)


@dataclass(frozen=True)
class CoverProblem:
    """Bitmask encoding of the 'partition into Lagrangians' exact cover."""

    dims: PrimeDim
    classes: tuple[CommutingClass, ...]
    masks: np.ndarray          # uint64 (n_rows, n_words)
    point_indptr: np.ndarray   # int32, candidate rows per point (CSR)
    point_rows: np.ndarray     # int32
    row_indptr: np.ndarray     # int32, points per row (CSR transpose)
    row_points: np.ndarray     # int32
    row_adj: np.ndarray        # uint64, pairwise row intersection bitmasks
    n_points: int
    categories: np.ndarray     # int32 index into category_order(n)
    n_categories: int

    def solver_args(self) -> tuple:
        return (
            self.masks,
            self.point_indptr,
            self.point_rows,
            self.n_points,
            self.row_indptr,
            self.row_points,
            self.row_adj,
        )

    def partition_from_rows(self, rows) -> MubPartition:
        return MubPartition(tuple(self.classes[r] for r in sorted(rows)), self.dims)

    def signature_of_rows(self, rows) -> StructureSignature:
        counts = [0] * self.n_categories
        for r in rows:
            counts[self.categories[r]] += 1
        return StructureSignature(tuple(counts))


@lru_cache(maxsize=None)
def build_cover_problem(dims: PrimeDim) -> CoverProblem:
    """Columns are projective points; rows are the Lagrangian classes."""
    d, n = dims.d, dims.n
    classes = enumerate_lagrangians(dims)
    points: dict[tuple[int, ...], int] = {}
    for vec in itertools.product(range(d), repeat=2 * n):
        if any(vec) and vec[next(i for i, x in enumerate(vec) if x)] == 1:
            points[vec] = len(points)
    n_points = len(points)
    n_words = (n_points + 63) // 64
    masks = np.zeros((len(classes), n_words), dtype=np.uint64)
    rows_per_point: list[list[int]] = [[] for _ in range(n_points)]
    points_per_row: list[list[int]] = [[] for _ in range(len(classes))]
    for r, cls_ in enumerate(classes):
        for lbl in cls_.members:
            p = points.get(zmod.projective_rep(lbl.vector(), d))
            if (int(masks[r, p >> 6]) >> (p & 63)) & 1:
                continue
            masks[r, p >> 6] |= np.uint64(1 << (p & 63))
            rows_per_point[p].append(r)
            points_per_row[r].append(p)

    def csr(lists):
        indptr = np.zeros(len(lists) + 1, dtype=np.int32)
        flat: list[int] = []
        for i, items in enumerate(lists):
            flat.extend(items)
            indptr[i + 1] = len(flat)
        return indptr, np.array(flat, dtype=np.int32)

    point_indptr, point_rows = csr(rows_per_point)
    row_indptr, row_points = csr(points_per_row)
    cat_index = {ms: i for i, ms in enumerate(category_order(n))}
    cats = np.array(
        [cat_index[finest_factorization(cls_, dims).size_multiset] for cls_ in classes],
        dtype=np.int32,
    )
    return CoverProblem(
        dims=dims,
        classes=classes,
        masks=masks,
        point_indptr=point_indptr,
        point_rows=point_rows,
        row_indptr=row_indptr,
        row_points=row_points,
        row_adj=cover.row_adjacency(masks),
        n_points=n_points,
        categories=cats,
        n_categories=len(category_order(n)),
    )


@dataclass
class Census:
    """Signature table from a partition search, with one example each."""

    dims: PrimeDim
    mode: str  # "exhaustive" | "sampled"
    signature_counts: dict[StructureSignature, int]
    examples: dict[StructureSignature, MubPartition]
    search_stats: dict
    partial: bool = False
    wall_time_s: float = 0.0  # run-dependent; serialized in manifests only

    @property
    def signatures(self) -> set[StructureSignature]:
        return set(self.signature_counts)


def _root_branches(problem: CoverProblem):
    """Root column (same MRV rule as the kernels on an empty cover) + rows."""
    indptr = problem.point_indptr
    counts = indptr[1:] - indptr[:-1]
    p = int(np.argmin(counts))
    return p, [int(r) for r in problem.point_rows[indptr[p] : indptr[p + 1]]]


def enumerate_partitions(
    dims: PrimeDim,
    visitor=None,
    *,
    checkpoint_path: str | None = None,
    resume: bool = False,
    class_limit: int = EXHAUSTIVE_CLASS_LIMIT,
) -> Census:
    """Visit every MUB partition exactly once and census the signatures.

    Refused when the class table exceeds `class_limit` (default admits
    (2,2), (2,3) and (3,2)); larger instances belong to sampled_search.
    The search splits on the root column so progress can stream to a
    checkpoint file and resume after interruption.
    """
    from . import serialize  # local import: serialize depends on search types

    problem = build_cover_problem(dims)
    if len(problem.classes) > class_limit:
        raise BudgetRefusalError(
            f"{len(problem.classes)} classes exceeds the exhaustive limit "
            f"{class_limit}; use sampled_search"
        )
    counts: dict[StructureSignature, int] = {}
    examples: dict[StructureSignature, MubPartition] = {}
    total_nodes = 0
    start_branch = 0
    t0 = time.perf_counter()
    root_point, branches = _root_branches(problem)
    if resume and checkpoint_path and os.path.exists(checkpoint_path):
        counts, examples, total_nodes, start_branch = serialize.load_census_checkpoint(
            checkpoint_path, dims
        )
    for i in range(start_branch, len(branches)):
        sols, nodes, exhausted = cover.solve_cover(
            *problem.solver_args(),
            forced_rows=[branches[i]],
            column_rule=cover.RULE_MRV,
        )
        assert exhausted
        total_nodes += nodes
        for rows in sols:
            sig = problem.signature_of_rows(rows)
            counts[sig] = counts.get(sig, 0) + 1
            if sig not in examples:
                examples[sig] = problem.partition_from_rows(rows)
            if visitor is not None:
                visitor(problem.partition_from_rows(rows))
        if checkpoint_path:
            serialize.save_census_checkpoint(
                checkpoint_path, dims, counts, examples, total_nodes, i + 1
            )
    stats = {
        "nodes": total_nodes,
        "seed": None,  # exhaustive order is canonical, no randomness involved
        "root_point": root_point,
        "branches": len(branches),
        "partitions": sum(counts.values()),
    }
    return Census(dims, "exhaustive", counts, examples, stats, wall_time_s=time.perf_counter() - t0)


def _subseed(seed: int, k: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + k + 1) % (1 << 63)


def _row_bits(problem: CoverProblem) -> list[int]:
    """Row masks as single Python ints (for the seeding heuristics)."""
    nw = problem.masks.shape[1]
    return [
        sum(int(problem.masks[r, w]) << (64 * w) for w in range(nw))
        for r in range(problem.masks.shape[0])
    ]


def _pack_seed(problem, bits, target, rng, max_nodes: int = 5000) -> list[int] | None:
    """Randomized backtracking pick of classes filling the separable quotas.

    Seeds every category except the least-separable one, scarcest pool per
    needed class first; the kernel then completes the cover under the full
    quota vector. This is the 'bias toward separable classes': they are the
    scarce resource a target signature fights for. Pools are shuffled once
    per attempt; variation across attempts comes from the seeds.
    """
    n_cat = problem.n_categories
    by_cat = {c: np.flatnonzero(problem.categories == c).tolist() for c in range(n_cat)}
    seed_cats = sorted(
        (c for c in range(n_cat - 1) if target[c]),
        key=lambda c: len(by_cat[c]) / target[c],
    )
    slots = [c for c in seed_cats for _ in range(target[c])]
    pools = {}
    for c in seed_cats:
        pool = list(by_cat[c])
        rng.shuffle(pool)
        pools[c] = pool
    chosen: list[int] = []
    chosen_set: set[int] = set()
    state = {"covered": 0, "nodes": 0}

    def rec(i: int) -> bool:
        if i == len(slots):
            return True
        for r in pools[slots[i]]:
            if bits[r] & state["covered"] or r in chosen_set:
                continue
            state["nodes"] += 1
            if state["nodes"] > max_nodes:
                return False
            chosen.append(r)
            chosen_set.add(r)
            state["covered"] |= bits[r]
            if rec(i + 1):
                return True
            chosen.pop()
            chosen_set.discard(r)
            state["covered"] ^= bits[r]
        return False

    return chosen if rec(0) else None


def sampled_search(
    dims: PrimeDim,
    target: StructureSignature | tuple[int, ...] | None = None,
    *,
    budget: int = DEFAULT_RESTART_BUDGET,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> Census:
    """Randomized exact-cover restarts; deterministic for a given seed.

    With a target signature the kernel enforces per-category quotas, so any
    partition it returns matches the target exactly and the search stops at
    the first hit; odd restarts additionally pre-place the separable-side
    quotas by a randomized packer before the kernel completes the cover.
    Without a target, each restart contributes at most one partition and the
    census reports every distinct signature seen. An unfound target is
    flagged in search_stats, not an error.
    """
    from ._cover_py import _Xorshift

    problem = build_cover_problem(dims)
    quotas = None
    if target is not None:
        if isinstance(target, StructureSignature):
            target = target.counts
        target = tuple(int(x) for x in target)
        if len(target) != problem.n_categories or sum(target) != dims.m + 1:
            raise ValueError(
                f"target signature must have {problem.n_categories} counts summing to {dims.m + 1}"
            )
        quotas = np.array(target, dtype=np.int32)
    bits = _row_bits(problem) if quotas is not None else None
    counts: dict[StructureSignature, int] = {}
    examples: dict[StructureSignature, MubPartition] = {}
    total_nodes = 0
    used = 0
    t0 = time.perf_counter()
    for k in range(restarts):
        used = k + 1
        forced: list[int] = []
        if quotas is not None and k % 2 == 1:
            forced = _pack_seed(problem, bits, target, _Xorshift(_subseed(seed, k))) or []
        sols, nodes, _ = cover.solve_cover(
            *problem.solver_args(),
            forced_rows=forced,
            categories=problem.categories if quotas is not None else None,
            quotas=quotas,
            randomize=True,
            seed=_subseed(seed, k),
            node_budget=budget,
            max_solutions=1,
            column_rule=cover.RULE_MRV,
        )
        total_nodes += nodes
        if sols:
            sig = problem.signature_of_rows(sols[0])
            counts[sig] = counts.get(sig, 0) + 1
            if sig not in examples:
                examples[sig] = problem.partition_from_rows(sols[0])
            if target is not None:
                break
    target_sig = StructureSignature(tuple(target)) if target is not None else None
    stats = {
        "nodes": total_nodes,
        "seed": seed,
        "restarts": used,
        "budget_per_restart": budget,
        "target": str(target_sig) if target_sig else None,
        "target_found": bool(target_sig and target_sig in counts),
    }
    return Census(dims, "sampled", counts, examples, stats, wall_time_s=time.perf_counter() - t0)


def find_first_partition(dims: PrimeDim, seed: int = 0, budget: int = DEFAULT_RESTART_BUDGET) -> MubPartition:
    """One valid partition, cheaply and deterministically for a given seed."""
    problem = build_cover_problem(dims)
    for k in range(64):
        sols, _, _ = cover.solve_cover(
            *problem.solver_args(),
            randomize=k > 0,
            seed=_subseed(seed, k),
            node_budget=budget,
            max_solutions=1,
            column_rule=cover.RULE_MRV,
        )
        if sols:
            return problem.partition_from_rows(sols[0])
    raise RuntimeError(f"no partition found for {dims} within budget")
