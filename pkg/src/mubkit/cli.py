"""Command-line front end.

Subcommands: construct (complete MUB set for prime d), census (structure
signatures of all partitions, exhaustive or sampled), verify (certainty
relations on random or supplied states), tensor (composite-dimension sets),
extremize (certainty optimization), and report (claim-by-claim
reproduction table).

Exit codes: 0 success, 2 usage or parameter error, 3 exhaustive-budget
refusal, 4 data integrity failure.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import serialize
from .basis import build_complete_mub, default_pairing, mub_from_partition, tensor_mub
from .certainty import PureState, certainty_report, sweep_margins
from .errors import (
    BudgetRefusalError,
    DataIntegrityError,
    EnumerationCapError,
    IncompleteSetError,
    MubkitError,
    PairingError,
)
from .extremize import ExtremizationProblem, certainty_region_scan, extremize
from .search import enumerate_partitions, sampled_search, validate_partition
from .separability import StructureSignature
from .weyl import PrimeDim

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INTEGRITY = 4


def _fail(message: str, code: int) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(code)


def _prime_dims(d: int, n: int, context: str) -> PrimeDim:
    try:
        return PrimeDim(d, n)
    except ValueError as exc:
        if "not prime" in str(exc):
            raise _fail(
                f"{exc}; {context} needs a prime d -- build composite dimensions "
                "with the `tensor` subcommand",
                EXIT_USAGE,
            )
        raise _fail(str(exc), EXIT_USAGE)


def _load(path: str, kind: str) -> dict:
    try:
        return serialize.load_artifact(path, kind)
    except DataIntegrityError as exc:
        raise _fail(str(exc), EXIT_INTEGRITY)
    except FileNotFoundError:
        raise _fail(f"no such file: {path}", EXIT_USAGE)


# ------------------------------------------------------------- subcommands

def cmd_construct(args) -> int:
    dims = _prime_dims(args.d, args.n, "construct")
    if dims.m > 2**12:
        raise _fail(f"composite dimension {dims.m} exceeds the construction cap 4096", EXIT_USAGE)
    t0 = time.perf_counter()
    mub = build_complete_mub(dims, seed=args.seed)
    serialize.save_artifact(
        args.output,
        "mub_set",
        serialize.mubset_to_json(mub),
        command="construct",
        parameters={"d": args.d, "n": args.n},
        seed=args.seed,
        wall_time_s=time.perf_counter() - t0,
    )
    print(f"bases: {len(mub.bases)}")
    print(f"max unbiasedness deviation: {mub.max_dev:.3e}")
    print(f"wrote {args.output}")
    return EXIT_OK


def _parse_target(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.strip().strip("()").split(","))
    except ValueError:
        raise _fail(f"bad target signature {text!r}; expected e.g. 2,6,20", EXIT_USAGE)


def cmd_census(args) -> int:
    dims = _prime_dims(args.d, args.n, "census")
    target = _parse_target(args.target)
    t0 = time.perf_counter()
    if args.mode == "exhaustive":
        if target is not None:
            raise _fail("--target applies to sampled mode only", EXIT_USAGE)
        try:
            census = enumerate_partitions(
                dims, checkpoint_path=args.checkpoint, resume=args.resume
            )
        except (BudgetRefusalError, EnumerationCapError) as exc:
            raise _fail(str(exc), EXIT_BUDGET)
    else:
        try:
            census = sampled_search(
                dims, target=target, budget=args.budget, restarts=args.restarts, seed=args.seed
            )
        except (ValueError, EnumerationCapError) as exc:
            raise _fail(str(exc), EXIT_USAGE)
    serialize.save_artifact(
        args.output,
        "census",
        serialize.census_to_json(census),
        command="census",
        parameters={
            "d": args.d,
            "n": args.n,
            "mode": args.mode,
            "budget": args.budget,
            "restarts": args.restarts,
            "target": args.target,
        },
        seed=args.seed,
        wall_time_s=time.perf_counter() - t0,
    )
    print(f"mode: {census.mode}")
    for sig in sorted(census.signature_counts, key=lambda s: s.counts):
        print(f"  {sig}: {census.signature_counts[sig]}")
    if target is not None:
        sig = StructureSignature(target)
        status = "found" if census.search_stats.get("target_found") else "not found within budget"
        print(f"target {sig}: {status}")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_verify(args) -> int:
    envelope = _load(args.mubfile, "mub_set")
    mub = serialize.mubset_from_json(envelope["payload"])
    inputs = {args.mubfile: envelope["manifest"]["payload_digest"]}
    t0 = time.perf_counter()
    if args.state:
        state_env = _load(args.state, "state")
        state = serialize.state_from_json(state_env["payload"])
        inputs[args.state] = state_env["manifest"]["payload_digest"]
        if state.dim != mub.m:
            raise _fail("state dimension does not match the MUB set", EXIT_USAGE)
        report = certainty_report(state, mub)
        payload = {"mode": "single_state", "report": serialize.report_to_json(report)}
        for name, margin in report.margins.items():
            print(f"{name}: lhs_margin = {margin:+.3e}")
    else:
        payload = {"mode": "sweep", "sweep": sweep_margins(mub, args.states, seed=args.seed)}
        sweep = payload["sweep"]
        for name in ("pair", "general_J", "prime_J"):
            if name in sweep:
                print(f"{name}: min margin = {sweep[name]['min_margin']:+.3e}")
        if "full_invariant" in sweep:
            print(f"full invariant: max |sum - 2| = {sweep['full_invariant']['max_deviation']:.3e}")
    serialize.save_artifact(
        args.output,
        "certainty_report",
        payload,
        command="verify",
        parameters={"states": args.states, "state_file": args.state},
        seed=args.seed,
        inputs=inputs,
        wall_time_s=time.perf_counter() - t0,
    )
    print(f"wrote {args.output}")
    return EXIT_OK


def _parse_pairing(text: str | None) -> list[tuple[int, int]] | None:
    if text is None or text == "auto":
        return None
    try:
        pairs = []
        for chunk in text.split(","):
            i, j = chunk.split(":")
            pairs.append((int(i), int(j)))
        return pairs
    except ValueError:
        raise _fail(f"bad pairing {text!r}; expected e.g. 0:0,1:4", EXIT_USAGE)


def cmd_tensor(args) -> int:
    env_a = _load(args.set_a, "mub_set")
    env_b = _load(args.set_b, "mub_set")
    a = serialize.mubset_from_json(env_a["payload"])
    b = serialize.mubset_from_json(env_b["payload"])
    pairing = _parse_pairing(args.pairing)
    t0 = time.perf_counter()
    try:
        result = tensor_mub(a, b, pairing)
    except PairingError as exc:
        raise _fail(str(exc), EXIT_USAGE)
    serialize.save_artifact(
        args.output,
        "mub_set",
        serialize.mubset_to_json(result),
        command="tensor",
        parameters={"pairing": args.pairing or "auto"},
        inputs={
            args.set_a: env_a["manifest"]["payload_digest"],
            args.set_b: env_b["manifest"]["payload_digest"],
        },
        wall_time_s=time.perf_counter() - t0,
    )
    cats = sorted({basis.factorization.category for basis in result.bases if basis.factorization})
    print(f"dimension: {result.m}")
    print(f"bases: {len(result.bases)}")
    print(f"max unbiasedness deviation: {result.max_dev:.3e}")
    if cats:
        print(f"factorization classes: {', '.join(cats)}")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_extremize(args) -> int:
    envelope = _load(args.mubfile, "mub_set")
    mub = serialize.mubset_from_json(envelope["payload"])
    try:
        subset = [int(x) for x in args.subset.split(",")] if args.subset else list(range(len(mub.bases)))
    except ValueError:
        raise _fail(f"bad subset {args.subset!r}", EXIT_USAGE)
    if not all(0 <= i < len(mub.bases) for i in subset):
        raise _fail("subset index out of range", EXIT_USAGE)
    bases = [mub.bases[i] for i in subset]
    prime_case = not hasattr(mub.dims, "factors")
    j, m = len(bases), mub.m
    from .certainty import general_bound, prime_bound

    bound = (prime_bound(j, m) if prime_case else general_bound(j, m)) if j >= 2 else 1.0
    t0 = time.perf_counter()
    if args.scan:
        if len(bases) != 2:
            raise _fail("--scan needs exactly two bases in the subset", EXIT_USAGE)
        points = certainty_region_scan(bases[0], bases[1], grid=args.scan, seed=args.seed)
        payload = {
            "mode": "region_scan",
            "grid": args.scan,
            "points": [[a, b] for a, b in points],
            "pair_bound": 1.0 + 1.0 / m,
        }
        print(f"scanned {len(points)} frontier points")
    else:
        problem = ExtremizationProblem(
            bases=bases, sense=args.sense, restarts=args.restarts, seed=args.seed
        )
        result = extremize(problem)
        gap = bound - result.value
        payload = {
            "mode": "extremize",
            "sense": args.sense,
            "subset": subset,
            "value": result.value,
            "bound": bound,
            "gap": gap,
            "converged": result.converged,
            "iterations": result.iterations,
            "gradient_norm_at_exit": result.gradient_norm_at_exit,
            "per_basis": result.per_basis,
            "state": serialize.complex_vector_to_json(result.state.amplitudes),
        }
        print(f"value: {result.value:.9f}")
        print(f"bound: {bound:.9f}  gap: {gap:+.3e}")
        print(f"converged: {result.converged}")
    serialize.save_artifact(
        args.output,
        "extremization_result",
        payload,
        command="extremize",
        parameters={"subset": args.subset, "sense": args.sense, "restarts": args.restarts, "scan": args.scan},
        seed=args.seed,
        inputs={args.mubfile: envelope["manifest"]["payload_digest"]},
        wall_time_s=time.perf_counter() - t0,
    )
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_report(args) -> int:
    if args.topic != "paper":
        raise _fail(f"unknown report topic {args.topic!r}; available: paper", EXIT_USAGE)
    from .report import run_report

    lines = run_report(skip_slow=args.skip_slow, seed=args.seed)
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubkit",
        description="Mutually unbiased bases: construction, separability census, certainty relations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a complete MUB set for prime d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="mubset.json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("census", help="census structure signatures of MUB partitions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], required=True)
    p.add_argument("--budget", type=int, default=10**7, help="node budget per restart (sampled)")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", help="signature to hunt for, e.g. 2,6,20")
    p.add_argument("--checkpoint", help="stream progress to this file (exhaustive)")
    p.add_argument("--resume", action="store_true", help="resume from --checkpoint")
    p.add_argument("-o", "--output", default="census.json")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="check certainty relations for a MUB set file")
    p.add_argument("mubfile")
    p.add_argument("--states", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--state", help="single-state file instead of a random sweep")
    p.add_argument("-o", "--output", default="report.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tensor", help="tensor two MUB set files into a composite set")
    p.add_argument("set_a")
    p.add_argument("set_b")
    p.add_argument("--pairing", help="'auto' (match factorization classes) or e.g. 0:0,1:4")
    p.add_argument("-o", "--output", default="tensor.json")
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("extremize", help="extremize certainty sums over pure states")
    p.add_argument("mubfile")
    p.add_argument("--subset", help="comma-separated basis indices (default: all)")
    p.add_argument("--sense", choices=["max", "min"], default="max")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scan", type=int, help="grid size: scan the two-basis certainty region instead")
    p.add_argument("-o", "--output", default="extremum.json")
    p.set_defaults(func=cmd_extremize)

    p = sub.add_parser("report", help="run the reproduction suite and emit a markdown table")
    p.add_argument("topic", choices=["paper"])
    p.add_argument("--skip-slow", action="store_true", help="skip the long searches")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write markdown here instead of stdout")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except DataIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (BudgetRefusalError, EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PairingError, IncompleteSetError, MubkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
