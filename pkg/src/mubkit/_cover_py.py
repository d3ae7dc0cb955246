"""Pure-Python exact-cover kernel (reference twin of the compiled one).

Backtracking Algorithm-X over bitmask-encoded candidate sets, with
incremental bookkeeping: an alive-row set (rows compatible with the current
partial cover) is maintained through a precomputed row-adjacency table, and
per-point candidate counts drive min-remaining-values column selection in
O(points) per node instead of a full rescan.

The compiled kernel in ``_cover.pyx`` implements the identical search --
same column rule, same candidate order, same RNG -- so the two are
interchangeable and must return bit-identical results. See ``mubkit.cover``
for selection.
"""

from __future__ import annotations

RULE_LEX = 0
RULE_MRV = 1

KERNEL = "python"

_M64 = (1 << 64) - 1


def _mix64(seed: int) -> int:
    """splitmix64 scramble; never returns zero (xorshift fixed point)."""
    z = (seed + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    z ^= z >> 31
    return z or 0xD1B54A32D192ED03


class _Xorshift:
    """xorshift64* stream, bit-compatible with the compiled kernel."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = _mix64(seed & _M64)

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _M64
        x ^= x >> 27
        self.state = x
        return (x * 2685821657736338717) & _M64

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.next() % (i + 1)
            items[i], items[j] = items[j], items[i]


def _pack_words(matrix) -> list[int]:
    n_words = matrix.shape[1]
    out = []
    for r in range(matrix.shape[0]):
        v = 0
        for w in range(n_words - 1, -1, -1):
            v = (v << 64) | int(matrix[r, w])
        out.append(v)
    return out


def solve_cover(
    masks,
    point_indptr,
    point_rows,
    n_points,
    row_indptr,
    row_points,
    row_adj,
    forced_rows=(),
    categories=None,
    quotas=None,
    *,
    randomize=False,
    seed=1,
    node_budget=0,
    max_solutions=0,
    column_rule=RULE_MRV,
):
    """Enumerate exact covers of ``n_points`` columns by the given rows.

    masks: uint64 array (n_rows, n_words), bit p of row r set iff r covers p.
    point_indptr/point_rows: CSR of candidate rows per point, ascending.
    row_indptr/row_points: CSR of points per row (the transpose).
    row_adj: uint64 array (n_rows, n_row_words), bit s of row r set iff the
        two rows share a point (including r itself).
    forced_rows: rows preselected before the search starts.
    categories/quotas: optional per-row category and per-category caps; a
        row is skipped once its category quota is full, so with quotas
        summing to the cover size every solution matches them exactly.
    randomize: shuffle candidate rows at each node (seeded, deterministic).
    node_budget: abort after this many row trials (0 = unlimited).
    max_solutions: stop after this many solutions (0 = all).

    Returns (solutions, nodes, exhausted): each solution is a sorted tuple
    of row indices; exhausted is True iff the whole space was traversed.
    """
    n_rows = masks.shape[0]
    row_bits = _pack_words(masks)
    adj_bits = _pack_words(row_adj)
    full = (1 << n_points) - 1
    prows = [
        [int(r) for r in point_rows[point_indptr[p] : point_indptr[p + 1]]]
        for p in range(n_points)
    ]
    rpoints = [
        [int(p) for p in row_points[row_indptr[r] : row_indptr[r + 1]]]
        for r in range(n_rows)
    ]
    count = [len(prows[p]) for p in range(n_points)]
    use_quota = quotas is not None
    cats = [int(c) for c in categories] if categories is not None else None
    quota = [int(q) for q in quotas] if use_quota else []
    cat_count = [0] * len(quota)
    rng = _Xorshift(seed) if randomize else None

    solutions: list[tuple[int, ...]] = []
    selected: list[int] = []
    trail: list[int] = []  # rows killed, grouped per selection by offsets
    covered = 0
    alive = (1 << n_rows) - 1
    nodes = 0
    aborted = False
    done = False

    def select(r: int) -> int:
        nonlocal covered, alive
        offset = len(trail)
        killed = alive & adj_bits[r]
        alive ^= killed
        k = killed
        while k:
            b = k & -k
            s = b.bit_length() - 1
            k ^= b
            trail.append(s)
            for p in rpoints[s]:
                count[p] -= 1
        covered |= row_bits[r]
        selected.append(r)
        if use_quota:
            cat_count[cats[r]] += 1
        return offset

    def unselect(r: int, offset: int) -> None:
        nonlocal covered, alive
        if use_quota:
            cat_count[cats[r]] -= 1
        selected.pop()
        covered ^= row_bits[r]
        while len(trail) > offset:
            s = trail.pop()
            alive |= 1 << s
            for p in rpoints[s]:
                count[p] += 1

    def choose_column() -> int:
        if column_rule == RULE_LEX:
            free = ~covered & full
            return (free & -free).bit_length() - 1
        best_p = -1
        best_c = -1
        for p in range(n_points):
            if (covered >> p) & 1:
                continue
            c = count[p]
            if best_c < 0 or c < best_c:
                best_p = p
                best_c = c
                if c == 0:
                    break
        return best_p

    def recurse() -> None:
        nonlocal nodes, aborted, done
        if covered == full:
            solutions.append(tuple(sorted(selected)))
            if max_solutions and len(solutions) >= max_solutions:
                done = True
            return
        p = choose_column()
        cands = [
            r
            for r in prows[p]
            if (alive >> r) & 1 and (not use_quota or cat_count[cats[r]] < quota[cats[r]])
        ]
        if rng is not None:
            rng.shuffle(cands)
        for r in cands:
            nodes += 1
            if node_budget and nodes > node_budget:
                aborted = True
                return
            offset = select(r)
            recurse()
            unselect(r, offset)
            if aborted or done:
                return

    for r in forced_rows:
        r = int(r)
        if not (alive >> r) & 1 or (use_quota and cat_count[cats[r]] >= quota[cats[r]]):
            return [], 0, True
        select(r)

    recurse()
    return solutions, nodes, not aborted and not done
