"""Claim-by-claim reproduction table for the headline results.

Runs the same library calls as the acceptance tests and renders one
markdown row per claim: complete-set sizes, structure censuses, certainty
margins, the full-set invariant, extremizer saturation values, and the
dimension-216 composite construction.
"""

from __future__ import annotations

import time

from .basis import build_complete_mub, default_pairing, mub_from_partition, tensor_mub
from .certainty import sweep_margins
from .extremize import ExtremizationProblem, extremize
from .search import enumerate_partitions, sampled_search
from .separability import StructureSignature
from .weyl import PrimeDim

QUTRIT3_TARGETS = [(0, 12, 16), (1, 9, 18), (2, 6, 20), (3, 3, 22), (4, 0, 24)]
QUBIT4_TARGETS = [(2, 1, 2, 2, 10), (1, 1, 6, 2, 7), (1, 2, 4, 2, 8), (1, 3, 2, 2, 9)]


def build_dim216_set(seed: int = 0):
    """Nine certified MUBs on 216 = 8 x 27 covering all five factorization classes.

    Tensors a 9-basis three-qubit set of signature (2,3,4) with nine
    factorization-matched bases from a three-qutrit set of signature
    (2,6,20). Retries qutrit examples over sub-seeds until the class-level
    matching goes through.
    """
    census_q = enumerate_partitions(PrimeDim(2, 3))
    part_q = census_q.examples[StructureSignature((2, 3, 4))]
    mub_q = mub_from_partition(part_q, PrimeDim(2, 3))
    last_error = None
    for attempt in range(8):
        census_t = sampled_search(
            PrimeDim(3, 3), target=(2, 6, 20), budget=500_000, restarts=20, seed=seed + attempt
        )
        sig = StructureSignature((2, 6, 20))
        if sig not in census_t.examples:
            continue
        mub_t = mub_from_partition(census_t.examples[sig], PrimeDim(3, 3))
        try:
            pairing = default_pairing(mub_q, mub_t, count=9)
        except Exception as exc:  # unmatched bipartition kinds: try another example
            last_error = exc
            continue
        return tensor_mub(mub_q, mub_t, pairing)
    raise RuntimeError(f"no matchable qutrit example found: {last_error}")


def _row(rows: list, claim: str, expected: str, observed: str, ok: bool | None) -> None:
    status = "pass" if ok else "FAIL" if ok is False else "info"
    rows.append((claim, expected, observed, status))


def run_report(skip_slow: bool = False, seed: int = 0) -> list[str]:
    rows: list = []
    t_start = time.perf_counter()

    construct_cases = [(2, 1, 3), (3, 1, 4), (5, 1, 6), (2, 2, 5), (2, 3, 9), (3, 2, 10)]
    if not skip_slow:
        construct_cases.append((2, 4, 17))
    for d, n, want in construct_cases:
        mub = build_complete_mub(PrimeDim(d, n), seed=seed)
        ok = len(mub.bases) == want and mub.max_dev < 1e-9
        _row(
            rows,
            f"complete MUB set, d={d} N={n}",
            f"{want} bases, dev < 1e-9",
            f"{len(mub.bases)} bases, dev {mub.max_dev:.1e}",
            ok,
        )

    census = enumerate_partitions(PrimeDim(2, 2))
    sigs = sorted(str(s) for s in census.signatures)
    _row(
        rows,
        "two-qubit structures (exhaustive)",
        "(3,2) only",
        ", ".join(sigs) + f" over {sum(census.signature_counts.values())} partitions",
        sigs == ["(3,2)"],
    )

    census = enumerate_partitions(PrimeDim(3, 2))
    sigs = sorted(str(s) for s in census.signatures)
    _row(
        rows,
        "two-qutrit structures (exhaustive)",
        "(4,6) only",
        ", ".join(sigs) + f" over {sum(census.signature_counts.values())} partitions",
        sigs == ["(4,6)"],
    )

    census = enumerate_partitions(PrimeDim(2, 3))
    sigs = sorted(str(s) for s in census.signatures)
    want = ["(0,9,0)", "(1,6,2)", "(2,3,4)", "(3,0,6)"]
    _row(
        rows,
        "three-qubit structures (exhaustive)",
        ", ".join(want),
        ", ".join(sigs) + f" over {sum(census.signature_counts.values())} partitions",
        sigs == want,
    )

    if not skip_slow:
        found = []
        for target in QUTRIT3_TARGETS:
            c = sampled_search(PrimeDim(3, 3), target=target, budget=500_000, restarts=40, seed=seed)
            found.append(bool(c.search_stats["target_found"]))
        _row(
            rows,
            "three-qutrit structures (sampled)",
            "all of " + ", ".join(str(StructureSignature(t)) for t in QUTRIT3_TARGETS),
            ", ".join(
                f"{StructureSignature(t)}:{'yes' if f else 'no'}"
                for t, f in zip(QUTRIT3_TARGETS, found)
            ),
            all(found),
        )

        c = sampled_search(PrimeDim(2, 4), budget=500_000, restarts=4, seed=seed)
        got = next(iter(c.signatures), None)
        _row(
            rows,
            "four-qubit partition into 17 classes",
            "a valid 5-part signature summing to 17",
            f"{got} (sum {sum(got.counts) if got else '-'})",
            got is not None and sum(got.counts) == 17,
        )
        for target in QUBIT4_TARGETS:
            c = sampled_search(PrimeDim(2, 4), target=target, budget=150_000, restarts=30, seed=seed)
            status = "found" if c.search_stats["target_found"] else "not found within budget"
            _row(rows, f"four-qubit structure {StructureSignature(target)}", "example or flag", status, None)

    for d, n in [(2, 2), (2, 3), (3, 2)]:
        mub = build_complete_mub(PrimeDim(d, n), seed=seed)
        sweep = sweep_margins(mub, 10_000, seed=seed + 42)
        worst = min(sweep["pair"]["min_margin"], sweep["prime_J"]["min_margin"])
        dev = sweep["full_invariant"]["max_deviation"]
        _row(
            rows,
            f"certainty inequalities, M={mub.m} (10^4 states)",
            "margins >= -1e-9",
            f"min margin {worst:+.1e}",
            worst >= -1e-9,
        )
        _row(
            rows,
            f"full-set certainty sum, M={mub.m}",
            "= 2 within 1e-8",
            f"max deviation {dev:.1e}",
            dev < 1e-8,
        )

    mub4 = build_complete_mub(PrimeDim(2, 2), seed=seed)
    r = extremize(ExtremizationProblem(bases=mub4.bases[:2], sense="max", restarts=16, seed=seed))
    _row(
        rows,
        "max certainty sum, 2 MUBs, M=4",
        "1.25 (pair bound attained)",
        f"{r.value:.7f}",
        abs(r.value - 1.25) < 1e-6,
    )
    mub8 = build_complete_mub(PrimeDim(2, 3), seed=seed)
    r = extremize(ExtremizationProblem(bases=mub8.bases[:5], sense="max", restarts=16, seed=seed))
    _row(
        rows,
        "max certainty sum, 5 of 9 MUBs, M=8",
        "1.5 (prime bound attained)",
        f"{r.value:.7f}",
        abs(r.value - 1.5) < 1e-6,
    )

    if not skip_slow:
        big = build_dim216_set(seed=seed)
        blocks = {
            tuple(map(tuple, b.factorization.partition.sorted_blocks()))
            for b in big.bases
            if b.factorization
        }
        _row(
            rows,
            "composite construction, 8 x 27 = 216",
            "9 certified bases, all 5 factorization classes",
            f"{len(big.bases)} bases, dev {big.max_dev:.1e}, {len(blocks)} distinct classes",
            len(big.bases) == 9 and big.certified and len(blocks) == 5,
        )

    lines = [
        "# Reproduction report",
        "",
        f"Total runtime: {time.perf_counter() - t_start:.1f} s"
        + (" (slow rows skipped)" if skip_slow else ""),
        "",
        "| claim | expected | observed | status |",
        "|---|---|---|---|",
    ]
    for claim, expected, observed, status in rows:
        lines.append(f"| {claim} | {expected} | {observed} | {status} |")
    n_fail = sum(1 for r in rows if r[3] == "FAIL")
    lines.append("")
    lines.append(f"{len(rows)} rows, {n_fail} failures.")
    return lines
