"""Partition enumeration, sampled search, validation, checkpoints."""

import itertools

import pytest

from mubkit import (
    CommutingClass,
    MubPartition,
    PrimeDim,
    WeylLabel,
    enumerate_partitions,
    find_first_partition,
    sampled_search,
    validate_partition,
)
from mubkit import cover, serialize
from mubkit.errors import BudgetRefusalError
from mubkit.search import _root_branches, build_cover_problem
from mubkit.separability import StructureSignature

D22 = PrimeDim(2, 2)


def brute_force_two_qubit_partitions():
    """Independent oracle: recursive cover over member sets, no bitmasks."""
    from mubkit import enumerate_lagrangians

    classes = enumerate_lagrangians(D22)
    members = [frozenset(c.members) for c in classes]
    all_labels = frozenset().union(*members)
    partitions = []

    def rec(chosen, remaining):
        if not remaining:
            partitions.append(frozenset(chosen))
            return
        target = min(remaining, key=lambda lbl: lbl.vector())
        for i, mem in enumerate(members):
            if i in chosen or target not in mem or not (mem <= remaining):
                continue
            rec(chosen | {i}, remaining - mem)

    rec(frozenset(), all_labels)
    return {frozenset(classes[i] for i in p) for p in partitions}


def test_two_qubit_census_matches_brute_force():
    census = enumerate_partitions(D22)
    assert sum(census.signature_counts.values()) == 6
    assert set(census.signature_counts) == {StructureSignature((3, 2))}
    oracle = brute_force_two_qubit_partitions()
    assert len(oracle) == 6
    found = set()
    enumerate_partitions(D22, visitor=lambda p: found.add(frozenset(p.classes)))
    assert found == oracle


def test_every_visited_partition_validates(census23):
    for example in census23.examples.values():
        assert validate_partition(example, PrimeDim(2, 3))


def test_hand_built_two_qubit_partition_validates():
    gens = [("XI", "IX"), ("YI", "IY"), ("ZI", "IZ"), ("XY", "YZ"), ("YX", "ZY")]
    classes = tuple(
        CommutingClass([WeylLabel.from_pauli(a), WeylLabel.from_pauli(b)], D22) for a, b in gens
    )
    partition = MubPartition(classes, D22)
    assert validate_partition(partition, D22)
    assert partition.signature == StructureSignature((3, 2))


def test_validate_partition_catches_duplicates():
    part = find_first_partition(D22, seed=0)
    broken = MubPartition(part.classes[:-1] + (part.classes[0],), D22)
    result = validate_partition(broken, D22)
    assert not result
    assert any("overlap" in r for r in result.reasons)
    assert any("covers" in r or "overlap" in r for r in result.reasons)


def test_validate_partition_catches_wrong_count():
    part = find_first_partition(D22, seed=0)
    short = MubPartition(part.classes[:-1], D22)
    result = validate_partition(short, D22)
    assert not result and any("expected 5 classes" in r for r in result.reasons)


def test_exhaustive_refusal_for_large_dims():
    with pytest.raises(BudgetRefusalError, match="sampled_search"):
        enumerate_partitions(PrimeDim(2, 4))


def test_sampled_search_finds_two_qubit_signature():
    census = sampled_search(D22, budget=10_000, restarts=5, seed=1)
    assert StructureSignature((3, 2)) in census.signatures
    for example in census.examples.values():
        assert validate_partition(example, D22)


def test_sampled_search_deterministic():
    a = sampled_search(D22, budget=10_000, restarts=5, seed=9)
    b = sampled_search(D22, budget=10_000, restarts=5, seed=9)
    assert a.signature_counts == b.signature_counts
    assert serialize.dumps_canonical(serialize.census_to_json(a)) == serialize.dumps_canonical(
        serialize.census_to_json(b)
    )


def test_sampled_search_target_validation():
    with pytest.raises(ValueError, match="summing to"):
        sampled_search(D22, target=(3, 3), restarts=1)
    with pytest.raises(ValueError):
        sampled_search(D22, target=(1, 2, 2), restarts=1)


def test_sampled_search_flags_unfound_target():
    # (5,0) would need five fully separable classes; only 3^2 exist pairwise
    # compatible in one partition for two qubits, so the target is impossible
    census = sampled_search(D22, target=(5, 0), budget=5_000, restarts=3, seed=0)
    assert census.search_stats["target_found"] is False
    assert census.search_stats["target"] == "(5,0)"


def test_checkpoint_resume_matches_plain_run(tmp_path):
    dims = PrimeDim(3, 2)
    plain = enumerate_partitions(dims)

    # simulate an interrupted run: complete only the first two root branches
    problem = build_cover_problem(dims)
    root_point, branches = _root_branches(problem)
    counts, examples, nodes = {}, {}, 0
    for branch in branches[:2]:
        sols, n, _ = cover.solve_cover(*problem.solver_args(), forced_rows=[branch])
        nodes += n
        for rows in sols:
            sig = problem.signature_of_rows(rows)
            counts[sig] = counts.get(sig, 0) + 1
            examples.setdefault(sig, problem.partition_from_rows(rows))
    ckpt = tmp_path / "census.ckpt.json"
    serialize.save_census_checkpoint(str(ckpt), dims, counts, examples, nodes, 2)

    resumed = enumerate_partitions(dims, checkpoint_path=str(ckpt), resume=True)
    assert resumed.signature_counts == plain.signature_counts
    assert resumed.search_stats["nodes"] == plain.search_stats["nodes"]


def test_checkpoint_rejects_other_dims(tmp_path):
    from mubkit.errors import DataIntegrityError

    dims = PrimeDim(3, 2)
    census = enumerate_partitions(dims, checkpoint_path=str(tmp_path / "c.json"))
    assert census.signature_counts
    with pytest.raises(DataIntegrityError, match="different dims"):
        serialize.load_census_checkpoint(str(tmp_path / "c.json"), PrimeDim(2, 2))


def test_find_first_partition_deterministic():
    a = find_first_partition(D22, seed=4)
    b = find_first_partition(D22, seed=4)
    assert a.classes == b.classes
    assert validate_partition(a, D22)


def test_exhaustive_census_rerun_is_identical(census23):
    again = enumerate_partitions(PrimeDim(2, 3))
    assert serialize.dumps_canonical(serialize.census_to_json(again)) == serialize.dumps_canonical(
        serialize.census_to_json(census23)
    )
