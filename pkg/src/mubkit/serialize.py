"""JSON artifacts: canonical encoding, manifests, and digest checks.

Every output file is one canonical JSON document (sorted keys, fixed
separators) carrying a manifest with the command, parameters, seed and a
sha256 digest of the payload. Timestamps and wall times live only in the
manifest, so payloads from identical runs are byte-identical and digests
ignore run-dependent fields. Complex numbers are [re, im] pairs; symplectic
vectors are flat integer lists, X-part then Z-part.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone

import numpy as np

from .basis import Basis, CompositeDims, MubSet
from .certainty import CertaintyReport, PureState
from .errors import DataIntegrityError
from .search import Census, MubPartition
from .separability import FactorizationClass, ParticlePartition, StructureSignature
from .weyl import CommutingClass, PrimeDim

SCHEMA_VERSION = "mubkit/1"
TOOL_VERSION = "0.1.0"


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def payload_digest(payload) -> str:
    return "sha256:" + hashlib.sha256(dumps_canonical(payload).encode()).hexdigest()


def make_manifest(
    command: str,
    parameters: dict,
    seed: int | None,
    payload,
    inputs: dict[str, str] | None = None,
    wall_time_s: float | None = None,
) -> dict:
    return {
        "tool_version": TOOL_VERSION,
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_time_s": wall_time_s,
        "inputs": inputs or {},
        "payload_digest": payload_digest(payload),
    }


def save_artifact(
    path: str,
    kind: str,
    payload: dict,
    *,
    command: str,
    parameters: dict,
    seed: int | None = None,
    inputs: dict[str, str] | None = None,
    wall_time_s: float | None = None,
) -> dict:
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "manifest": make_manifest(command, parameters, seed, payload, inputs, wall_time_s),
        "payload": payload,
    }
    with open(path, "w") as fh:
        fh.write(dumps_canonical(envelope))
        fh.write("\n")
    return envelope


def load_artifact(path: str, expected_kind: str | None = None) -> dict:
    """Read an envelope and verify its payload digest."""
    with open(path) as fh:
        envelope = json.load(fh)
    if envelope.get("schema_version") != SCHEMA_VERSION:
        raise DataIntegrityError(f"unknown schema {envelope.get('schema_version')!r}")
    digest = envelope.get("manifest", {}).get("payload_digest")
    if digest != payload_digest(envelope["payload"]):
        raise DataIntegrityError(f"payload digest mismatch in {path}")
    if expected_kind and envelope.get("kind") != expected_kind:
        raise DataIntegrityError(f"expected {expected_kind} artifact, got {envelope.get('kind')}")
    return envelope


# ---------------------------------------------------------------- encoding

def complex_vector_to_json(vec: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in vec]


def complex_vector_from_json(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data])


def dims_to_json(dims: PrimeDim | CompositeDims) -> dict:
    if isinstance(dims, PrimeDim):
        return {"type": "prime", "d": dims.d, "n": dims.n, "m": dims.m}
    return {
        "type": "composite",
        "factors": [dims_to_json(f) for f in dims.factors],
        "m": dims.m,
    }


def dims_from_json(data) -> PrimeDim | CompositeDims:
    if data["type"] == "prime":
        return PrimeDim(data["d"], data["n"])
    return CompositeDims(tuple(dims_from_json(f) for f in data["factors"]))


def factorization_to_json(fact: FactorizationClass | None) -> dict | None:
    if fact is None:
        return None
    return {
        "blocks": [list(b) for b in fact.partition.sorted_blocks()],
        "category": fact.category,
    }


def factorization_from_json(data) -> FactorizationClass | None:
    if data is None:
        return None
    partition = ParticlePartition.of(*data["blocks"])
    return FactorizationClass(partition, data["category"])


def basis_to_json(basis: Basis) -> dict:
    return {
        "vectors": [complex_vector_to_json(v) for v in basis.vectors],
        "source": [list(row) for row in basis.source.generator_matrix()] if basis.source else None,
        "factorization": factorization_to_json(basis.factorization),
    }


def basis_from_json(data, dims: PrimeDim | CompositeDims) -> Basis:
    vectors = np.array([complex_vector_from_json(v) for v in data["vectors"]])
    source = None
    if data.get("source") is not None and isinstance(dims, PrimeDim):
        source = CommutingClass(data["source"], dims)
    return Basis(
        vectors,
        source=source,
        factorization=factorization_from_json(data.get("factorization")),
        _dims=dims if source is not None else None,
    )


def mubset_to_json(mub: MubSet) -> dict:
    return {
        "dims": dims_to_json(mub.dims),
        "n_bases": len(mub.bases),
        "certified": mub.certified,
        "max_dev": float(mub.max_dev),
        "bases": [basis_to_json(b) for b in mub.bases],
    }


def mubset_from_json(data) -> MubSet:
    dims = dims_from_json(data["dims"])
    bases = [basis_from_json(b, dims) for b in data["bases"]]
    return MubSet(dims, bases, bool(data["certified"]), float(data["max_dev"]))


def partition_to_json(partition: MubPartition) -> dict:
    return {
        "dims": dims_to_json(partition.dims),
        "classes": [[list(row) for row in c.generator_matrix()] for c in partition.classes],
        "signature": list(partition.signature.counts),
    }


def partition_from_json(data) -> MubPartition:
    dims = dims_from_json(data["dims"])
    classes = tuple(CommutingClass(rows, dims) for rows in data["classes"])
    return MubPartition(classes, dims)


def census_to_json(census: Census) -> dict:
    rows = []
    for sig in sorted(census.signature_counts, key=lambda s: s.counts):
        rows.append(
            {
                "signature": list(sig.counts),
                "count": census.signature_counts[sig],
                "example": partition_to_json(census.examples[sig]),
            }
        )
    return {
        "dims": dims_to_json(census.dims),
        "mode": census.mode,
        "signatures": rows,
        "search_stats": census.search_stats,
        "partial": census.partial,
    }


def census_from_json(data) -> Census:
    dims = dims_from_json(data["dims"])
    counts = {}
    examples = {}
    for row in data["signatures"]:
        sig = StructureSignature(tuple(row["signature"]))
        counts[sig] = row["count"]
        examples[sig] = partition_from_json(row["example"])
    return Census(
        dims,
        data["mode"],
        counts,
        examples,
        data.get("search_stats", {}),
        partial=data.get("partial", False),
    )


def state_to_json(state: PureState) -> dict:
    return {"m": state.dim, "amplitudes": complex_vector_to_json(state.amplitudes)}


def state_from_json(data) -> PureState:
    return PureState(complex_vector_from_json(data["amplitudes"]))


def report_to_json(report: CertaintyReport) -> dict:
    return {
        "m": report.m,
        "n_bases": report.n_bases,
        "prime_case": report.prime_case,
        "complete": report.complete,
        "per_basis": [float(c) for c in report.per_basis],
        "sums": report.sums,
        "bounds": report.bounds,
        "margins": report.margins,
    }


# ------------------------------------------------------------- checkpoints

def save_census_checkpoint(path, dims, counts, examples, nodes, branch_done) -> None:
    payload = {
        "dims": dims_to_json(dims),
        "mode": "exhaustive",
        "partial": True,
        "resume": {"branch_done": branch_done, "nodes": nodes},
        "signatures": [
            {
                "signature": list(sig.counts),
                "count": counts[sig],
                "example": partition_to_json(examples[sig]),
            }
            for sig in sorted(counts, key=lambda s: s.counts)
        ],
    }
    save_artifact(
        path,
        "census_checkpoint",
        payload,
        command="census",
        parameters={"d": dims.d, "n": dims.n, "mode": "exhaustive"},
    )


def load_census_checkpoint(path, dims):
    envelope = load_artifact(path, "census_checkpoint")
    payload = envelope["payload"]
    if dims_from_json(payload["dims"]) != dims:
        raise DataIntegrityError("checkpoint belongs to different dims")
    counts = {}
    examples = {}
    for row in payload["signatures"]:
        sig = StructureSignature(tuple(row["signature"]))
        counts[sig] = row["count"]
        examples[sig] = partition_from_json(row["example"])
    resume = payload["resume"]
    return counts, examples, resume["nodes"], resume["branch_done"]
