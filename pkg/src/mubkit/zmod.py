"""Exact linear algebra over the prime fields Z_d.

All routines operate on small matrices given as sequences of row tuples
with integer entries. Rows are reduced mod d on entry and results come
back as plain tuples, so canonical forms can be hashed and compared
directly.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence

Row = tuple[int, ...]


def inv_mod(x: int, d: int) -> int:
    """Multiplicative inverse of x mod the prime d."""
    return pow(x, -1, d)


def rref(rows: Sequence[Sequence[int]], d: int) -> tuple[Row, ...]:
    """Reduced row-echelon form over Z_d, zero rows dropped.

    The result is the canonical representative of the row space: two
    matrices span the same subspace iff their rref forms are equal.
    """
    mat = [[x % d for x in row] for row in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot, len(mat)) if mat[r][col]), None)
        if pr is None:
            continue
        mat[pivot], mat[pr] = mat[pr], mat[pivot]
        inv = pow(mat[pivot][col], -1, d)
        mat[pivot] = [(x * inv) % d for x in mat[pivot]]
        prow = mat[pivot]
        for r in range(len(mat)):
            if r != pivot and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % d for a, b in zip(mat[r], prow)]
        pivot += 1
        if pivot == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot])


def rref_extend(rows: tuple[Row, ...], vec: Sequence[int], d: int) -> tuple[Row, ...] | None:
    """Insert one vector into an rref matrix, keeping rref form.

    Returns the extended canonical form, or None when vec already lies in
    the row space. Much cheaper than re-running rref from scratch during
    incremental subspace searches.
    """
    w = [x % d for x in vec]
    ncols = len(w)
    for row in rows:
        lead = next(c for c in range(ncols) if row[c])
        if w[lead]:
            f = w[lead]
            w = [(a - f * b) % d for a, b in zip(w, row)]
    lead = next((c for c in range(ncols) if w[c]), None)
    if lead is None:
        return None
    inv = pow(w[lead], -1, d)
    w = [(x * inv) % d for x in w]
    out: list[list[int]] = [list(r) for r in rows]
    pos = next((i for i, row in enumerate(out) if next(c for c in range(ncols) if row[c]) > lead), len(out))
    out.insert(pos, w)
    # clear the new pivot column in the rows above
    for i in range(pos):
        f = out[i][lead]
        if f:
            out[i] = [(a - f * b) % d for a, b in zip(out[i], w)]
    return tuple(tuple(r) for r in out)


def rank(rows: Sequence[Sequence[int]], d: int) -> int:
    return len(rref(rows, d))


def nullspace(rows: Sequence[Sequence[int]], d: int, width: int) -> tuple[Row, ...]:
    """Canonical basis of the solution space of the linear forms `rows`."""
    red = rref(rows, d)
    pivots = [next(c for c in range(width) if row[c]) for row in red]
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * width
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % d
        basis.append(tuple(v))
    return tuple(basis)


def span_nonzero(rows: Sequence[Row], d: int) -> Iterator[Row]:
    """All nonzero Z_d-combinations of the given rows (no dedup)."""
    k = len(rows)
    width = len(rows[0]) if rows else 0
    for coeffs in itertools.product(range(d), repeat=k):
        if not any(coeffs):
            continue
        vec = [0] * width
        for c, row in zip(coeffs, rows):
            if c:
                for j in range(width):
                    vec[j] = (vec[j] + c * row[j]) % d
        yield tuple(vec)


def projective_rep(vec: Sequence[int], d: int) -> Row:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    lead = next(x for x in vec if x)
    if lead == 1:
        return tuple(vec)
    inv = pow(lead, -1, d)
    return tuple((x * inv) % d for x in vec)
