#!/usr/bin/env python3
"""Benchmark the compiled exact-cover kernel against the pure-Python twin.

Workloads:
  * exhaustive partition enumeration for 2 and 3 qubits and 2 qutrits
  * one randomized-partition hit for 3 qutrits (node budget capped)

Also asserts both kernels return identical solution lists.

Run after `pip install -e .`:  python3 benchmarks/bench_cover.py
"""

import time

from mubkit import PrimeDim
from mubkit.cover import kernels
from mubkit.search import _subseed, build_cover_problem


def main():
    table = kernels()
    if "compiled" not in table:
        print("note: compiled kernel unavailable; timing pure Python only")

    cases = [
        ("exhaustive 2 qubits", PrimeDim(2, 2), {}),
        ("exhaustive 2 qutrits", PrimeDim(3, 2), {}),
        ("exhaustive 3 qubits", PrimeDim(2, 3), {}),
        (
            "randomized 3 qutrits (first hit)",
            PrimeDim(3, 3),
            {"randomize": True, "seed": _subseed(0, 0), "max_solutions": 1, "node_budget": 10**6},
        ),
    ]

    print(f"{'case':36s} {'kernel':9s} {'time':>9s} {'solutions':>10s} {'nodes':>10s}")
    for name, dims, kwargs in cases:
        problem = build_cover_problem(dims)
        results = {}
        baseline = None
        for kernel_name in ("python", "compiled"):
            if kernel_name not in table:
                continue
            t0 = time.perf_counter()
            sols, nodes, _ = table[kernel_name](*problem.solver_args(), **kwargs)
            dt = time.perf_counter() - t0
            results[kernel_name] = sols
            speedup = f"  ({baseline / dt:.0f}x)" if baseline is not None else ""
            if kernel_name == "python":
                baseline = dt
            print(f"{name:36s} {kernel_name:9s} {dt:8.3f}s {len(sols):10d} {nodes:10d}{speedup}")
        if len(results) == 2:
            assert results["python"] == results["compiled"], f"kernels disagree on {name}"
    if len(table) == 2:
        print("kernels agree on every case")


if __name__ == "__main__":
    main()
