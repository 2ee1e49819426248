"""Column-by-column dynamic program for contracting a graph to a grid with r rows.

A table index is a valid tuple (S, D): S is the union of the columns built so
far and D, the last column, is a k-potential r-slab. For each budget k' the
table keeps the set of column counts q' reachable for that index.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Optional

from ._bits import iter_bits, to_tuple
from .graph import Corners, Graph, GraphError, WitnessMap, component_masks, nbr_mask
from .slabs import RSlab, _Search

__all__ = [
    "PotentialSlab",
    "ValidTuple",
    "SolveStats",
    "SolveResult",
    "enumerate_potential_slabs",
    "enumerate_valid_tuples",
    "compute_extenders",
    "solve_bounded",
    "solve_annotated",
    "solve_path",
    "BoundedDP",
]

YES = "YES"
NO = "NO"


@dataclass(frozen=True)
class PotentialSlab:
    slab: RSlab
    neighborhood_size: int

    @property
    def mask(self) -> int:
        return self.slab.mask


@dataclass(frozen=True)
class ValidTuple:
    S: int
    slab: PotentialSlab

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.S, self.slab.slab.masks)

    @property
    def D(self) -> int:
        return self.slab.mask

    def vertex_set(self) -> tuple[int, ...]:
        return to_tuple(self.S)


@dataclass
class SolveStats:
    tuples: int = 0
    table_entries: int = 0
    extender_calls: int = 0
    extenders: int = 0
    dropped_updates: int = 0
    search_nodes: int = 0
    peak_candidates: int = 0
    elapsed: float = 0.0

    def merge(self, other: "SolveStats") -> None:
        self.tuples += other.tuples
        self.table_entries += other.table_entries
        self.extender_calls += other.extender_calls
        self.extenders += other.extenders
        self.dropped_updates += other.dropped_updates
        self.search_nodes += other.search_nodes
        self.peak_candidates = max(self.peak_candidates, other.peak_candidates)
        self.elapsed += other.elapsed


@dataclass
class SolveResult:
    verdict: str
    certificate: Optional[WitnessMap] = None
    stats: SolveStats = field(default_factory=SolveStats)
    # set when the certificate refers to a reduced graph rather than the input
    reduced_graph: Optional[Graph] = None
    reduction_map: Optional[dict[int, int]] = None

    @property
    def yes(self) -> bool:
        return self.verdict == YES


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("the solver requires a connected graph")


def enumerate_potential_slabs(g: Graph, k: int, r: int) -> list[PotentialSlab]:
    """r-slabs D with |D| + |N(D)| <= k + 3r leaving at most two components."""
    budget = k + 3 * r
    out = []
    found: set[tuple[int, ...]] = set()
    for v in g.vertices():
        s = _Search(g, r, budget, budget, 0, (1 << v) - 1, budget)
        s.run([1 << v] + [0] * (r - 1))
        found |= s.found
    for masks in sorted(found, key=lambda ms: tuple(to_tuple(x) for x in ms)):
        slab = RSlab(masks)
        d = slab.mask
        if len(component_masks(g, g.full_mask & ~d)) <= 2:
            out.append(PotentialSlab(slab, nbr_mask(g, d).bit_count()))
    return out


def _tuples_of(g: Graph, ps: PotentialSlab) -> list[ValidTuple]:
    d = ps.mask
    comps = component_masks(g, g.full_mask & ~d)
    if not comps:
        return [ValidTuple(d, ps)]
    if len(comps) == 1:
        return [ValidTuple(comps[0] | d, ps), ValidTuple(d, ps)]
    return [ValidTuple(c | d, ps) for c in comps]


def enumerate_valid_tuples(g: Graph, k: int, r: int,
                           slabs: Optional[list[PotentialSlab]] = None) -> list[ValidTuple]:
    if slabs is None:
        slabs = enumerate_potential_slabs(g, k, r)
    out: list[ValidTuple] = []
    for ps in slabs:
        out.extend(_tuples_of(g, ps))
    return out


_POOLS: dict[tuple[Graph, int, int], dict] = {}


def _pool_cache(g: Graph, k: int, r: int) -> dict:
    """Extender pools per tuple key, shared by every run on (g, k, r)."""
    key = (g, k, r)
    hit = _POOLS.get(key)
    if hit is None:
        if len(_POOLS) >= 16:
            _POOLS.clear()
        hit = _POOLS[key] = {}
    return hit


def _extender_pool(g: Graph, t: ValidTuple, k: int, r: int, stats: Optional[SolveStats] = None,
                   size_cap: Optional[int] = None) -> dict[tuple[int, int], list[RSlab]]:
    """Candidate next columns of ``t`` grouped by (|A|, |N(A) - S|)."""
    budget = k + 3 * r - t.D.bit_count()
    seeds = [nbr_mask(g, m) & ~t.S for m in t.slab.slab.masks]
    if budget < r or not all(seeds):
        # an empty seed part means D_i has no neighbour beyond S: no column can follow
        return {}
    alpha = budget if size_cap is None else min(budget, size_cap)
    s = _Search(g, r, alpha, budget, t.S, 0, budget)
    s.run(seeds)
    if stats is not None:
        stats.extender_calls += 1
        stats.search_nodes += s.nodes
    pool: dict[tuple[int, int], list[RSlab]] = {}
    for masks in sorted(s.found, key=lambda ms: tuple(to_tuple(x) for x in ms)):
        slab = RSlab(masks)
        a = slab.mask.bit_count()
        b = (nbr_mask(g, slab.mask) & ~t.S).bit_count()
        pool.setdefault((a, b), []).append(slab)
    return pool


def compute_extenders(g: Graph, t: ValidTuple, a: int, b: int, k: int, r: int) -> list[RSlab]:
    """Column extenders of ``t`` with exactly |A| = a and |N(A) - S| = b."""
    if a < r or a + b + t.D.bit_count() > k + 3 * r:
        return []
    if nbr_mask(g, t.S).bit_count() > a:
        return []
    return list(_extender_pool(g, t, k, r).get((a, b), []))


@dataclass
class _Final:
    key: tuple
    kp: int
    q: int


class BoundedDP:
    """One run of the table for (g, k, r), optionally pinned to corners x1 and x4."""

    def __init__(self, g: Graph, k: int, r: int, x1: Optional[int] = None, x4: Optional[int] = None):
        _require_connected(g)
        if k < 0 or r < 1:
            raise ValueError("need k >= 0 and r >= 1")
        self.g, self.k, self.r = g, k, r
        self.x1, self.x4 = x1, x4
        self.stats = SolveStats()
        self.tuples: dict[tuple, ValidTuple] = {}
        self.reach: dict[tuple, list[set[int]]] = {}
        self.pred: dict[tuple, tuple] = {}
        self.finals: list[_Final] = []
        start = time.perf_counter()
        self._run()
        self.stats.elapsed = time.perf_counter() - start

    def _initial(self) -> list[ValidTuple]:
        """First columns D with (D, D) valid that some budget k' can afford.

        k' >= |D| - r and k' + |N(D)| - r <= k give |D|, |N(D)| <= k + r and
        |D| + |N(D)| <= k + 2r.
        """
        g, k, r = self.g, self.k, self.r
        cap = k + r
        found: set[tuple[int, ...]] = set()
        if self.x1 is None:
            for v in g.vertices():
                s = _Search(g, r, cap, cap, 0, (1 << v) - 1, k + 2 * r)
                s.run([1 << v] + [0] * (r - 1))
                found |= s.found
        else:
            seed = [0] * r
            seed[0] |= 1 << self.x1
            seed[-1] |= 1 << self.x4
            s = _Search(g, r, cap, cap, 0, 0, k + 2 * r)
            s.run(seed)
            found = s.found
        out = []
        for masks in found:
            slab = RSlab(masks)
            d = slab.mask
            if len(component_masks(g, g.full_mask & ~d)) <= 1:
                out.append(ValidTuple(d, PotentialSlab(slab, nbr_mask(g, d).bit_count())))
        return out

    def _target(self, s_mask: int, slab: RSlab) -> Optional[ValidTuple]:
        """(S, A) as a valid tuple, or None when it is not one."""
        g = self.g
        a = slab.mask
        info = self._slab_info.get(a)
        if info is None:
            nb = nbr_mask(g, a).bit_count()
            info = self._slab_info[a] = (nb, component_masks(g, g.full_mask & ~a))
        nb, comps = info
        if a.bit_count() + nb > self.k + 3 * self.r or len(comps) > 2:
            return None
        extra = s_mask & ~a
        if extra == 0 and len(comps) > 1:
            return None
        if extra and extra not in comps:
            return None
        return ValidTuple(s_mask, PotentialSlab(slab, nb))

    def _run(self) -> None:
        g, k, r = self.g, self.k, self.r
        self._slab_info: dict[int, tuple] = {}
        heap: list[tuple] = []

        def push(t: ValidTuple) -> None:
            self.tuples[t.key] = t
            order = (t.S.bit_count(), t.D.bit_count(), tuple(to_tuple(x) for x in t.key[1]), t.S)
            heapq.heappush(heap, (order, t.key))

        for t in sorted(self._initial(), key=lambda t: t.key):
            ns = nbr_mask(g, t.S).bit_count()
            for kp in range(max(0, t.D.bit_count() - r), k + 1):
                if kp + ns - r <= k:
                    if t.key not in self.tuples:
                        push(t)
                    self._add(t.key, kp, 1, None)
        full = g.full_mask
        pools = _pool_cache(g, k, r)
        while heap:
            _, key = heapq.heappop(heap)
            t = self.tuples[key]
            levels = self.reach[key]
            for kp in range(k + 1):
                if levels[kp]:
                    self.stats.table_entries += 1
            if t.S == full:
                for kp in range(k + 1):
                    for q in sorted(levels[kp]):
                        self.finals.append(_Final(key, kp, q))
                continue
            pool = pools.get(key)
            if pool is None:
                pool = pools[key] = _extender_pool(g, t, k, r, self.stats, size_cap=k + r)
            size = sum(len(v) for v in pool.values())
            self.stats.peak_candidates = max(self.stats.peak_candidates, size)
            ns = nbr_mask(g, t.S).bit_count()
            dsize = t.D.bit_count()
            seen: set[int] = set()
            for kp in range(k + 1):
                fresh = levels[kp] - seen
                if not fresh:
                    continue
                seen |= fresh
                for (a, b), slabs in pool.items():
                    if a < r or a < ns or a + b + dsize > k + 3 * r or kp + a - r > k:
                        continue
                    for slab in slabs:
                        self.stats.extenders += 1
                        tkey = (t.S | slab.mask, slab.masks)
                        target = self.tuples.get(tkey)
                        if target is None:
                            target = self._target(t.S | slab.mask, slab)
                            if target is None:
                                self.stats.dropped_updates += 1
                                continue
                        tns = nbr_mask(g, target.S).bit_count()
                        for k1 in range(kp + a - r, k + 1):
                            if k1 + tns - r > k:
                                break
                            if tkey not in self.tuples:
                                push(target)
                            for q in fresh:
                                self._add(tkey, k1, q + 1, (key, kp, q, slab))
        self.stats.tuples = len(self.tuples)

    def _add(self, key: tuple, kp: int, q: int, parent: Optional[tuple]) -> None:
        levels = self.reach.get(key)
        if levels is None:
            levels = self.reach[key] = [set() for _ in range(self.k + 1)]
        if q in levels[kp]:
            return
        levels[kp].add(q)
        self.pred[(key, kp, q)] = parent

    def accepted(self) -> list[_Final]:
        return sorted(self.finals, key=lambda f: (f.kp, f.q, f.key[1], f.key[0]))

    def witness(self, final: _Final) -> WitnessMap:
        cols: list[RSlab] = []
        node = (final.key, final.kp, final.q)
        while True:
            parent = self.pred[node]
            key = node[0]
            if parent is None:
                cols.append(self.tuples[key].slab.slab)
                break
            pkey, pkp, pq, slab = parent
            cols.append(slab)
            node = (pkey, pkp, pq)
        cols.reverse()
        assign = {}
        for j, col in enumerate(cols, start=1):
            for i, m in enumerate(col.masks, start=1):
                for v in iter_bits(m):
                    assign[v] = (i, j)
        return WitnessMap(self.r, len(cols), assign)


def solve_bounded(g: Graph, k: int, r: int) -> SolveResult:
    """Is ``g`` k-contractible to a grid with exactly r rows (any column count)?"""
    dp = BoundedDP(g, k, r)
    acc = dp.accepted()
    if not acc:
        return SolveResult(NO, None, dp.stats)
    return SolveResult(YES, dp.witness(acc[0]), dp.stats)


def solve_path(g: Graph, k: int) -> SolveResult:
    """Is ``g`` k-contractible to a path?"""
    return solve_bounded(g, k, 1)


_ANNOTATED_CACHE: dict[tuple, BoundedDP] = {}
_CACHE_LIMIT = 256


def _annotated_dp(g: Graph, k: int, r: int, x1: int, x4: int) -> BoundedDP:
    key = (g, k, r, x1, x4)
    dp = _ANNOTATED_CACHE.get(key)
    if dp is None:
        if len(_ANNOTATED_CACHE) >= _CACHE_LIMIT:
            _ANNOTATED_CACHE.clear()
        dp = _ANNOTATED_CACHE[key] = BoundedDP(g, k, r, x1, x4)
    return dp


def clear_cache() -> None:
    _ANNOTATED_CACHE.clear()
    _POOLS.clear()


def solve_annotated(g: Graph, k: int, r: int, q: int, c: Corners) -> SolveResult:
    """k-contractibility to the r x q grid with x1..x4 in the cells of t1..t4.

    Orientation: t1 = (1, 1), t2 = (1, q), t3 = (r, q), t4 = (r, 1).
    """
    if r < 2 or q < 2:
        raise ValueError("annotated solving needs r, q >= 2")
    Corners.of(*c)
    n = g.n
    if r * q > n or r * q < n - k:
        return SolveResult(NO)
    dp = _annotated_dp(g, k, r, c.x1, c.x4)
    for f in dp.accepted():
        if f.q != q:
            continue
        masks = dp.tuples[f.key].slab.slab.masks
        if masks[0] >> c.x2 & 1 and masks[-1] >> c.x3 & 1:
            return SolveResult(YES, dp.witness(f), dp.stats)
    return SolveResult(NO, None, dp.stats)
