"""Command-line behavior: happy paths, exit codes, reproducibility."""

import json

import numpy as np
import pytest

from mubkit import PrimeDim, serialize
from mubkit.cli import main


def run_cli(args):
    try:
        return main(args)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0


def scrub(path):
    """File content with the run-dependent manifest fields removed."""
    doc = json.loads(path.read_text())
    doc["manifest"].pop("created_utc", None)
    doc["manifest"].pop("wall_time_s", None)
    return serialize.dumps_canonical(doc)


def test_construct_two_qubits(tmp_path, capsys):
    out = tmp_path / "m22.json"
    assert run_cli(["construct", "--d", "2", "--n", "2", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "bases: 5" in printed
    env = serialize.load_artifact(str(out), "mub_set")
    mub = serialize.mubset_from_json(env["payload"])
    assert len(mub.bases) == 5 and mub.max_dev < 1e-9


def test_construct_nonprime_exits_2(tmp_path, capsys):
    code = run_cli(["construct", "--d", "4", "--n", "1", "-o", str(tmp_path / "x.json")])
    assert code == 2
    assert "tensor" in capsys.readouterr().err


def test_construct_reruns_identical_modulo_timestamp(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["construct", "--d", "2", "--n", "1", "--seed", "5", "-o", str(a)]) == 0
    assert run_cli(["construct", "--d", "2", "--n", "1", "--seed", "5", "-o", str(b)]) == 0
    assert scrub(a) == scrub(b)
    da = json.loads(a.read_text())["manifest"]["payload_digest"]
    db = json.loads(b.read_text())["manifest"]["payload_digest"]
    assert da == db


def test_census_exhaustive_two_qubits(tmp_path, capsys):
    out = tmp_path / "c22.json"
    assert run_cli(["census", "--d", "2", "--n", "2", "--mode", "exhaustive", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "(3,2): 6" in printed
    census = serialize.census_from_json(serialize.load_artifact(str(out), "census")["payload"])
    assert sum(census.signature_counts.values()) == 6


def test_census_exhaustive_refusal_exits_3(tmp_path, capsys):
    code = run_cli(["census", "--d", "2", "--n", "4", "--mode", "exhaustive", "-o", str(tmp_path / "x.json")])
    assert code == 3
    assert "sampled" in capsys.readouterr().err


def test_census_sampled_with_target(tmp_path, capsys):
    out = tmp_path / "cs.json"
    code = run_cli(
        ["census", "--d", "2", "--n", "2", "--mode", "sampled", "--target", "3,2",
         "--budget", "10000", "--restarts", "5", "-o", str(out)]
    )
    assert code == 0
    assert "target (3,2): found" in capsys.readouterr().out


def test_census_sampled_bad_target_exits_2(tmp_path):
    code = run_cli(
        ["census", "--d", "2", "--n", "2", "--mode", "sampled", "--target", "9,9,9",
         "-o", str(tmp_path / "x.json")]
    )
    assert code == 2


def test_verify_sweep_and_state(tmp_path, capsys):
    mubfile = tmp_path / "m.json"
    run_cli(["construct", "--d", "2", "--n", "2", "-o", str(mubfile)])
    out = tmp_path / "r.json"
    assert run_cli(["verify", str(mubfile), "--states", "500", "--seed", "1", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "min margin" in printed and "full invariant" in printed
    payload = serialize.load_artifact(str(out), "certainty_report")["payload"]
    assert payload["sweep"]["pair"]["min_margin"] >= -1e-9

    # single eigenstate: full-set certainty sum saturates at 2
    env = serialize.load_artifact(str(mubfile), "mub_set")
    mub = serialize.mubset_from_json(env["payload"])
    statefile = tmp_path / "s.json"
    from mubkit import PureState

    serialize.save_artifact(
        str(statefile), "state",
        serialize.state_to_json(PureState(mub.bases[0].vectors[0].copy())),
        command="test", parameters={},
    )
    out2 = tmp_path / "r2.json"
    assert run_cli(["verify", str(mubfile), "--state", str(statefile), "-o", str(out2)]) == 0
    payload = serialize.load_artifact(str(out2), "certainty_report")["payload"]
    assert abs(payload["report"]["margins"]["full"]) < 1e-10


def test_verify_corrupted_file_exits_4(tmp_path, capsys):
    mubfile = tmp_path / "m.json"
    run_cli(["construct", "--d", "2", "--n", "1", "-o", str(mubfile)])
    doc = json.loads(mubfile.read_text())
    doc["payload"]["max_dev"] = 0.123
    mubfile.write_text(json.dumps(doc))
    assert run_cli(["verify", str(mubfile), "-o", str(tmp_path / "r.json")]) == 4
    assert "digest" in capsys.readouterr().err


def test_tensor_auto_and_errors(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(["construct", "--d", "2", "--n", "1", "-o", str(a)])
    run_cli(["construct", "--d", "3", "--n", "1", "-o", str(b)])
    out = tmp_path / "t.json"
    assert run_cli(["tensor", str(a), str(b), "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "dimension: 6" in printed and "bases: 3" in printed
    mub = serialize.mubset_from_json(serialize.load_artifact(str(out), "mub_set")["payload"])
    assert mub.m == 6 and mub.certified

    assert run_cli(["tensor", str(a), str(b), "--pairing", "0:0,0:1", "-o", str(out)]) == 2
    assert run_cli(["tensor", str(a), str(b), "--pairing", "0:0,1:1,2:2,2:3", "-o", str(out)]) == 2
    assert run_cli(["tensor", str(a), str(b), "--pairing", "nonsense", "-o", str(out)]) == 2


def test_extremize_pair_bound(tmp_path, capsys):
    mubfile = tmp_path / "m.json"
    run_cli(["construct", "--d", "2", "--n", "2", "-o", str(mubfile)])
    out = tmp_path / "e.json"
    code = run_cli(
        ["extremize", str(mubfile), "--subset", "0,1", "--sense", "max",
         "--restarts", "8", "--seed", "1", "-o", str(out)]
    )
    assert code == 0
    payload = serialize.load_artifact(str(out), "extremization_result")["payload"]
    assert abs(payload["value"] - 1.25) < 1e-6
    assert abs(payload["bound"] - 1.25) < 1e-12
    assert abs(payload["gap"]) < 1e-6


def test_extremize_bad_subset_exits_2(tmp_path):
    mubfile = tmp_path / "m.json"
    run_cli(["construct", "--d", "2", "--n", "1", "-o", str(mubfile)])
    assert run_cli(["extremize", str(mubfile), "--subset", "0,9", "-o", str(tmp_path / "e.json")]) == 2


def test_missing_file_exits_2(tmp_path):
    assert run_cli(["verify", str(tmp_path / "absent.json"), "-o", str(tmp_path / "r.json")]) == 2


def test_report_paper_skip_slow(tmp_path, capsys):
    out = tmp_path / "report.md"
    assert run_cli(["report", "paper", "--skip-slow", "-o", str(out)]) == 0
    text = out.read_text()
    assert "| claim |" in text
    assert "0 failures" in text
