"""Exhaustive reference answers for grid contraction, NAE-SAT and hypergraph 2-colouring.

Nothing here shares logic with the solvers beyond graph primitives, so the
two can be checked against each other.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from ._bits import iter_bits
from .graph import (
    Corners,
    Graph,
    WitnessMap,
    contract_edges,
    diameter,
    is_connected_mask,
    recognize_grid,
)
from .instances import Hypergraph, NaeFormula

__all__ = [
    "BudgetExceeded",
    "Check",
    "Verdict",
    "verify_witness",
    "brute_force_grid",
    "brute_force_nae",
    "brute_force_hypergraph_2col",
    "grid_orientations",
]

DEFAULT_BUDGET = 2_000_000
TRUTH_TABLE_LIMIT = 20


class BudgetExceeded(RuntimeError):
    """The exhaustive search would exceed its configured budget."""


class Check(NamedTuple):
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class Verdict:
    answer: str  # YES, NO or BUDGET
    witness: Optional[WitnessMap] = None
    explored: int = 0

    @property
    def yes(self) -> bool:
        return self.answer == "YES"


def budget_from_env() -> int:
    raw = os.environ.get("GRIDCTL_BUDGET", "")
    try:
        return int(raw) if raw else DEFAULT_BUDGET
    except ValueError:
        return DEFAULT_BUDGET


def verify_witness(g: Graph, w: WitnessMap, k: int) -> Check:
    r, q = w.rows, w.cols
    if r < 1 or q < 1:
        return Check(False, "bad-shape: grid dimensions must be positive")
    missing = [v for v in g.vertices() if v not in w.assign]
    if missing:
        return Check(False, f"incomplete: vertex {missing[0]} is unassigned")
    extra = [v for v in w.assign if not 1 <= v <= g.n]
    if extra:
        return Check(False, f"unknown-vertex: {extra[0]} is not a vertex")
    for v, (i, j) in w.assign.items():
        if not (1 <= i <= r and 1 <= j <= q):
            return Check(False, f"out-of-range: vertex {v} sits in cell ({i},{j})")
    cells = w.cells()
    if len(cells) != r * q:
        hole = next((i, j) for i in range(1, r + 1) for j in range(1, q + 1) if (i, j) not in cells)
        return Check(False, f"not-onto: cell {hole} is empty")
    for c, m in sorted(cells.items()):
        if not is_connected_mask(g, m):
            return Check(False, f"disconnected-cell: cell {c} does not induce a connected subgraph")
    touch: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    for u, v in g.edges():
        a, b = w.assign[u], w.assign[v]
        if a == b:
            continue
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            return Check(False, f"extra-adjacency: edge {u}-{v} joins non-adjacent cells {a} and {b}")
        touch.add((min(a, b), max(a, b)))
    for i in range(1, r + 1):
        for j in range(1, q + 1):
            for c2 in ((i + 1, j), (i, j + 1)):
                if c2[0] <= r and c2[1] <= q and ((i, j), c2) not in touch:
                    return Check(False, f"missing-adjacency: cells {(i, j)} and {c2} are not joined")
    cost = g.n - r * q
    if cost > k:
        return Check(False, f"cost: {cost} contractions exceed k={k}")
    return Check(True, "ok")


def grid_orientations(w: WitnessMap) -> Iterator[WitnessMap]:
    """All images of ``w`` under symmetries of the grid, in both shapes."""
    r, q = w.rows, w.cols
    seen = set()
    for transpose in (False, True):
        for fi in (False, True):
            for fj in (False, True):
                assign = {}
                for v, (i, j) in w.assign.items():
                    i2 = r + 1 - i if fi else i
                    j2 = q + 1 - j if fj else j
                    assign[v] = (j2, i2) if transpose else (i2, j2)
                shape = (q, r) if transpose else (r, q)
                key = (shape, tuple(sorted(assign.items())))
                if key in seen:
                    continue
                seen.add(key)
                yield WitnessMap(shape[0], shape[1], assign)


def _corner_ok(w: WitnessMap, c: Corners) -> bool:
    r, q = w.rows, w.cols
    a = w.assign
    return a[c.x1] == (1, 1) and a[c.x2] == (1, q) and a[c.x3] == (r, q) and a[c.x4] == (r, 1)


def _make_filter(rows: Optional[int], cols: Optional[int], min_side: int,
                 corners: Optional[Corners]) -> Callable[[WitnessMap], Optional[WitnessMap]]:
    def pick(w: WitnessMap) -> Optional[WitnessMap]:
        for o in grid_orientations(w):
            if rows is not None and o.rows != rows:
                continue
            if cols is not None and o.cols != cols:
                continue
            if min(o.rows, o.cols) < min_side:
                continue
            if corners is not None and not _corner_ok(o, corners):
                continue
            return o
        return None
    return pick


def brute_force_grid(g: Graph, k: int, *, rows: Optional[int] = None, cols: Optional[int] = None,
                     min_side: int = 1, corners: Optional[Corners] = None,
                     method: str = "edges", budget: Optional[int] = None) -> Verdict:
    """Search all contractions of at most ``k`` edges for a grid target.

    ``rows``/``cols`` pin the target shape (the witness is oriented to match),
    ``min_side=2`` excludes paths and ``corners`` demands x1..x4 in the corner
    cells. ``method="partition"`` searches witness partitions directly and is
    meant for graphs too large for edge subsets.
    """
    if budget is None:
        budget = budget_from_env()
    if g.n == 0 or not g.is_connected():
        return Verdict("NO")
    pick = _make_filter(rows, cols, min_side, corners)
    if method == "edges":
        return _by_edges(g, k, pick, budget)
    if method == "partition":
        return _by_partition(g, k, rows, cols, min_side, pick, budget)
    raise ValueError(f"unknown oracle method {method!r}")


def _by_edges(g: Graph, k: int, pick, budget: int) -> Verdict:
    edges = g.edges()
    explored = 0
    for size in range(0, min(k, len(edges)) + 1):
        for f in combinations(edges, size):
            explored += 1
            if explored > budget:
                return Verdict("BUDGET", None, explored - 1)
            h, label = contract_edges(g, f)
            coords = recognize_grid(h)
            if coords is None:
                continue
            w = WitnessMap(coords.rows, coords.cols, {v: coords.assign[label[v]] for v in g.vertices()})
            o = pick(w)
            if o is not None:
                return Verdict("YES", o, explored)
    return Verdict("NO", None, explored)


# --------------------------------------------------------------------------
# partition search


def _shapes(n: int, k: int, rows, cols, min_side: int, diam: int) -> list[tuple[int, int]]:
    out = []
    for r in range(1, n + 1):
        for q in range(r, n + 1):
            if not (n - k <= r * q <= n) or r < min_side:
                continue
            if r + q - 2 > diam:  # contraction never increases the diameter
                continue
            if rows is not None and rows not in (r, q):
                continue
            if cols is not None and cols not in (r, q):
                continue
            out.append((r, q))
    return out


def _by_partition(g: Graph, k: int, rows, cols, min_side: int, pick, budget: int) -> Verdict:
    explored = 0
    for r, q in _shapes(g.n, k, rows, cols, min_side, diameter(g)):
        if (r, q) == (2, 2):
            found, count = _two_by_two(g, budget - explored, pick)
        else:
            found, count = _backtrack(g, r, q, budget - explored, pick)
        explored += count
        if found is not None:
            return Verdict("YES", found, explored)
        if explored >= budget:
            return Verdict("BUDGET", None, explored)
    return Verdict("NO", None, explored)


class _ByteTables:
    """N(mask) for uint64 arrays via one 256-entry table per byte of the mask."""

    def __init__(self, g: Graph):
        nbytes = (g.n + 1 + 7) // 8
        self.tables = []
        for byte in range(nbytes):
            t = np.zeros(256, dtype=np.uint64)
            for val in range(256):
                acc = 0
                for bit in range(8):
                    v = byte * 8 + bit
                    if val >> bit & 1 and 1 <= v <= g.n:
                        acc |= g.nbr(v)
                t[val] = acc
            self.tables.append(t)

    def closed(self, mask: np.ndarray) -> np.ndarray:
        out = mask.copy()
        for byte, t in enumerate(self.tables):
            out |= t[((mask >> np.uint64(8 * byte)) & np.uint64(255)).astype(np.intp)]
        return out

    def open(self, mask: np.ndarray) -> np.ndarray:
        return self.closed(mask) & ~mask

    def fill(self, start: np.ndarray, allowed: np.ndarray) -> np.ndarray:
        comp = start & allowed
        while True:
            grow = self.closed(comp) & allowed
            if np.array_equal(grow, comp):
                return comp
            comp = grow


def _lowbit(x: np.ndarray) -> np.ndarray:
    return x & (~x + np.uint64(1))


def _two_by_two(g: Graph, budget: int, pick) -> tuple[Optional[WitnessMap], int]:
    """Split V into S = W1 u W3 (holding vertex 1) and its complement W2 u W4."""
    n = g.n
    if n < 4 or n > 62:
        return None, 0
    tab = _ByteTables(g)
    full = np.uint64(g.full_mask)
    rest_bits = n - 1
    total = 1 << rest_bits
    batch = 1 << 20
    explored = 0
    for base in range(0, total, batch):
        if explored >= budget:
            return None, explored
        hi = min(total, base + batch, base + budget - explored)
        idx = np.arange(base, hi, dtype=np.uint64)
        explored += hi - base
        s = (idx << np.uint64(2)) | np.uint64(2)
        t = full & ~s
        ok = t != 0
        s, t = s[ok], t[ok]
        a = tab.fill(_lowbit(s), s)
        b = s & ~a
        ok = (b != 0) & (tab.fill(_lowbit(b), b) == b)
        s, t, a, b = s[ok], t[ok], a[ok], b[ok]
        c = tab.fill(_lowbit(t), t)
        d = t & ~c
        ok = (d != 0) & (tab.fill(_lowbit(d), d) == d)
        s, t, a, b, c, d = s[ok], t[ok], a[ok], b[ok], c[ok], d[ok]
        na, nb = tab.open(a), tab.open(b)
        ok = ((na & c) != 0) & ((na & d) != 0) & ((nb & c) != 0) & ((nb & d) != 0)
        for i in np.flatnonzero(ok):
            cells = {(1, 1): int(a[i]), (1, 2): int(c[i]), (2, 2): int(b[i]), (2, 1): int(d[i])}
            w = WitnessMap(2, 2, {v: cell for cell, m in cells.items() for v in iter_bits(m)})
            o = pick(w)
            if o is not None:
                return o, explored
    return None, explored


def _backtrack(g: Graph, r: int, q: int, budget: int, pick) -> tuple[Optional[WitnessMap], int]:
    """Assign vertices to cells in BFS order; edges may only join equal or adjacent cells."""
    order: list[int] = []
    seen = 0
    for start in g.vertices():
        if seen >> start & 1:
            continue
        queue = [start]
        seen |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in iter_bits(g.nbr(v) & ~seen):
                seen |= 1 << w
                queue.append(w)
    cells = [(i, j) for i in range(1, r + 1) for j in range(1, q + 1)]
    assign: dict[int, tuple[int, int]] = {}
    count = [0]
    result: list[WitnessMap] = []

    def options(v: int) -> list[tuple[int, int]]:
        placed = [assign[u] for u in iter_bits(g.nbr(v)) if u in assign]
        if not placed:
            # first vertex: one cell per orbit would do; keep it simple and exhaustive
            return cells
        out = []
        for c in cells:
            if all(abs(c[0] - p[0]) + abs(c[1] - p[1]) <= 1 for p in placed):
                out.append(c)
        return out

    def rec(pos: int) -> bool:
        count[0] += 1
        if count[0] > budget:
            return True
        if pos == len(order):
            w = WitnessMap(r, q, dict(assign))
            if len(w.cells()) == r * q and verify_witness(g, w, g.n).ok:
                o = pick(w)
                if o is not None:
                    result.append(o)
                    return True
            return False
        remaining = len(order) - pos
        used = len(set(assign.values()))
        if r * q - used > remaining:
            return False
        v = order[pos]
        for c in options(v):
            assign[v] = c
            if rec(pos + 1):
                return True
            del assign[v]
        return False

    rec(0)
    return (result[0] if result else None), count[0]


# --------------------------------------------------------------------------
# truth tables


def brute_force_nae(f: NaeFormula) -> bool:
    n = f.variable_count
    if n > TRUTH_TABLE_LIMIT:
        raise BudgetExceeded(f"{n} variables exceed the truth-table limit {TRUTH_TABLE_LIMIT}")
    for bits in range(1 << n):
        if all(_nae_clause(bits, c) for c in f.clauses):
            return True
    return False


def _nae_clause(bits: int, clause) -> bool:
    vals = {(bits >> (abs(l) - 1) & 1) == (1 if l > 0 else 0) for l in clause}
    return len(vals) == 2


def brute_force_hypergraph_2col(h: Hypergraph) -> bool:
    n = h.vertex_count
    if n > TRUTH_TABLE_LIMIT:
        raise BudgetExceeded(f"{n} vertices exceed the colouring limit {TRUTH_TABLE_LIMIT}")
    edge_masks = [sum(1 << (v - 1) for v in e) for e in h.edges]
    for colour in range(1 << n):
        if all(0 < (colour & m) != m for m in edge_masks):
            return True
    return False
