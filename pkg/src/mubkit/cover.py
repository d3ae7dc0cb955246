"""Kernel selection: compiled exact-cover core with pure-Python fallback.

The compiled extension is preferred when it imported cleanly; set
``MUBKIT_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the kernel-equivalence tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _cover_py

RULE_LEX = _cover_py.RULE_LEX
RULE_MRV = _cover_py.RULE_MRV


def row_adjacency(masks: np.ndarray) -> np.ndarray:
    """Row-row intersection table as packed uint64 bitmasks.

    Bit s of row r is set iff the two rows share a point; a row is adjacent
    to itself. The kernels use this to maintain the alive-row set.
    """
    n_rows = masks.shape[0]
    n_row_words = (n_rows + 63) // 64
    adj = np.zeros((n_rows, n_row_words), dtype=np.uint64)
    ones = np.uint64(1)
    for r in range(n_rows):
        hits = np.flatnonzero((masks & masks[r]).any(axis=1)).astype(np.uint64)
        np.bitwise_or.at(adj[r], (hits >> np.uint64(6)).astype(np.intp), ones << (hits & np.uint64(63)))
    return adj

try:
    from . import _cover  # type: ignore[attr-defined]

    _HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _cover = None
    _HAVE_COMPILED = False


def _want_pure() -> bool:
    return os.environ.get("MUBKIT_PURE_PYTHON", "").strip() in {"1", "true", "yes"}


if _HAVE_COMPILED and not _want_pure():
    solve_cover = _cover.solve_cover
    KERNEL = "compiled"
else:
    solve_cover = _cover_py.solve_cover
    KERNEL = "python"


def kernels() -> dict[str, object]:
    """All available kernel implementations, keyed by name."""
    table: dict[str, object] = {"python": _cover_py.solve_cover}
    if _HAVE_COMPILED:
        table["compiled"] = _cover.solve_cover
    return table
