"""Artifact round-trips, canonical encoding, digest verification."""

import json

import numpy as np
import pytest

from mubkit import PrimeDim, PureState, build_complete_mub, enumerate_partitions, haar_states
from mubkit import serialize
from mubkit.certainty import certainty_report
from mubkit.errors import DataIntegrityError


def roundtrip(tmp_path, kind, payload):
    path = tmp_path / f"{kind}.json"
    serialize.save_artifact(str(path), kind, payload, command="test", parameters={}, seed=0)
    original = path.read_text()
    envelope = serialize.load_artifact(str(path), kind)
    assert serialize.dumps_canonical(envelope) + "\n" == original
    return envelope


def test_mubset_roundtrip_bytes_and_content(tmp_path, mub4):
    payload = serialize.mubset_to_json(mub4)
    envelope = roundtrip(tmp_path, "mub_set", payload)
    loaded = serialize.mubset_from_json(envelope["payload"])
    assert loaded.m == 4 and len(loaded.bases) == 5 and loaded.certified
    for a, b in zip(mub4.bases, loaded.bases):
        assert np.allclose(a.vectors, b.vectors)
        assert (a.source is None) == (b.source is None)
        if a.source is not None:
            assert a.source == b.source
        assert a.factorization == b.factorization


def test_census_roundtrip(tmp_path):
    census = enumerate_partitions(PrimeDim(2, 2))
    payload = serialize.census_to_json(census)
    envelope = roundtrip(tmp_path, "census", payload)
    loaded = serialize.census_from_json(envelope["payload"])
    assert loaded.signature_counts == census.signature_counts
    assert loaded.mode == "exhaustive"
    for sig, example in loaded.examples.items():
        assert example.classes == census.examples[sig].classes


def test_partition_roundtrip(tmp_path):
    from mubkit import find_first_partition

    part = find_first_partition(PrimeDim(2, 2), seed=0)
    payload = serialize.partition_to_json(part)
    envelope = roundtrip(tmp_path, "partition", payload)
    loaded = serialize.partition_from_json(envelope["payload"])
    assert loaded.classes == part.classes
    assert loaded.signature == part.signature


def test_state_and_report_roundtrip(tmp_path, mub9):
    state = PureState(haar_states(9, 1, seed=3)[0])
    envelope = roundtrip(tmp_path, "state", serialize.state_to_json(state))
    loaded = serialize.state_from_json(envelope["payload"])
    assert np.allclose(loaded.amplitudes, state.amplitudes)

    report = certainty_report(state, mub9)
    roundtrip(tmp_path, "certainty_report", serialize.report_to_json(report))


def test_digest_detects_corruption(tmp_path, mub4):
    path = tmp_path / "set.json"
    serialize.save_artifact(
        str(path), "mub_set", serialize.mubset_to_json(mub4), command="t", parameters={}
    )
    doc = json.loads(path.read_text())
    doc["payload"]["max_dev"] = 0.5
    path.write_text(json.dumps(doc))
    with pytest.raises(DataIntegrityError, match="digest"):
        serialize.load_artifact(str(path))


def test_wrong_kind_rejected(tmp_path, mub4):
    path = tmp_path / "set.json"
    serialize.save_artifact(
        str(path), "mub_set", serialize.mubset_to_json(mub4), command="t", parameters={}
    )
    with pytest.raises(DataIntegrityError, match="expected census"):
        serialize.load_artifact(str(path), "census")


def test_loaded_basis_is_validated(tmp_path, mub4):
    # tampering with vectors breaks orthonormality before digest kicks in
    payload = serialize.mubset_to_json(mub4)
    payload["bases"][0]["vectors"][0][1] = [0.9, 0.0]
    with pytest.raises(ValueError):
        serialize.mubset_from_json(payload)


def test_complex_encoding():
    vec = np.array([1 + 2j, -0.5j])
    encoded = serialize.complex_vector_to_json(vec)
    assert encoded == [[1.0, 2.0], [0.0, -0.5]]
    assert np.array_equal(serialize.complex_vector_from_json(encoded), vec)


def test_symplectic_vectors_are_flat_int_lists(mub4):
    payload = serialize.mubset_to_json(mub4)
    gen_rows = payload["bases"][0]["source"]
    assert all(isinstance(x, int) for row in gen_rows for x in row)
    assert all(len(row) == 4 for row in gen_rows)  # X-part then Z-part


def test_composite_dims_roundtrip():
    from mubkit import build_complete_mub, tensor_mub

    a = build_complete_mub(PrimeDim(2, 1), seed=0)
    b = build_complete_mub(PrimeDim(3, 1), seed=0)
    out = tensor_mub(a, b)
    data = serialize.mubset_to_json(out)
    loaded = serialize.mubset_from_json(data)
    assert loaded.m == 6
    assert not loaded.is_complete()
    assert serialize.dumps_canonical(serialize.mubset_to_json(loaded)) == serialize.dumps_canonical(data)


def test_schema_version_checked(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": "other/9", "payload": {}}))
    with pytest.raises(DataIntegrityError, match="unknown schema"):
        serialize.load_artifact(str(path))
