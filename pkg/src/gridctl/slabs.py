"""Enumeration of r-slabs: ordered partitions of a connected set into chained columns.

An r-slab is a sequence A_1..A_r of nonempty connected sets with A_i ~ A_j
exactly when |i - j| = 1, whose outside neighbourhoods B_i = N(A_i) - A are
pairwise disjoint and only touch for consecutive indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ._bits import iter_bits, mask_of, to_tuple
from .graph import Graph, is_connected_mask, nbr_mask

__all__ = [
    "RSlab",
    "is_rslab",
    "enumerate_seeded",
    "enumerate_all",
    "enumerate_connected_sets",
]


@dataclass(frozen=True, order=True)
class RSlab:
    """Ordered parts stored as bitmasks; ``parts`` exposes sorted tuples."""

    masks: tuple[int, ...]

    @classmethod
    def from_parts(cls, parts: Iterable[Iterable[int]]) -> "RSlab":
        return cls(tuple(mask_of(p) for p in parts))

    @property
    def r(self) -> int:
        return len(self.masks)

    @property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        return tuple(to_tuple(m) for m in self.masks)

    @property
    def mask(self) -> int:
        out = 0
        for m in self.masks:
            out |= m
        return out

    @property
    def vertices(self) -> tuple[int, ...]:
        return to_tuple(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        return "RSlab(" + ", ".join("{" + ",".join(map(str, p)) + "}" for p in self.parts) + ")"


def _touches(g: Graph, a: int, b: int) -> bool:
    return bool(nbr_mask(g, a) & b)


def is_rslab(g: Graph, masks: Sequence[int]) -> bool:
    """Check every r-slab condition for the given part masks in ``g``."""
    r = len(masks)
    if r == 0:
        return False
    union = 0
    for m in masks:
        if not m or m & union or not is_connected_mask(g, m):
            return False
        union |= m
    if not is_connected_mask(g, union):
        return False
    for i in range(r):
        for j in range(i + 1, r):
            if _touches(g, masks[i], masks[j]) != (j == i + 1):
                return False
    outs = [nbr_mask(g, m) & ~union for m in masks]
    for i in range(r):
        for j in range(i + 1, r):
            if outs[i] & outs[j]:
                return False
            if j > i + 1 and _touches(g, outs[i], outs[j]):
                return False
    return True


class _Search:
    """Four-way branching over the smallest unresolved neighbour of the partial slab."""

    def __init__(self, g: Graph, r: int, alpha: int, beta: int,
                 forbidden: int, block1: int, total: Optional[int]):
        self.g = g
        self.r = r
        self.alpha = alpha
        self.beta = beta
        self.forbidden = forbidden
        self.block1 = block1
        self.total = total
        self.found: set[tuple[int, ...]] = set()
        self.nodes = 0

    def budget_ok(self, size: int, excluded: int) -> bool:
        if size > self.alpha or excluded > self.beta:
            return False
        return self.total is None or size + excluded <= self.total

    def run(self, parts: list[int]) -> None:
        union = 0
        for p in parts:
            if p & union or p & self.forbidden:
                return
            union |= p
        if not union:
            return
        if parts[0] & self.block1:
            return
        nb = [nbr_mask(self.g, p) for p in parts]
        for i in range(self.r):
            for j in range(i + 2, self.r):
                if nb[i] & parts[j]:
                    return
        self._grow(parts, union, 0, self.alpha + self.beta + 1)

    def _grow(self, parts: list[int], union: int, excl: int, prev_mu: int) -> None:
        self.nodes += 1
        g = self.g
        size, nx = union.bit_count(), excl.bit_count()
        mu = self.alpha - size + self.beta - nx
        assert mu < prev_mu, "branching measure must decrease"
        if not self.budget_ok(size, nx):
            return
        cand = nbr_mask(g, union) & ~excl & ~self.forbidden
        if not cand:
            if all(parts) and is_rslab(g, parts):
                self.found.add(tuple(parts))
            return
        # every pending neighbour ends up in A or in N(A); empty parts still need a vertex
        pending = cand.bit_count()
        r = self.r
        empty = [i for i in range(r) if not parts[i]]
        # parts with no filled neighbour can only take vertices not seen yet
        far = sum(1 for j in empty if not any(parts[i] for i in range(max(0, j - 1), min(r, j + 2))))
        cap = self.alpha + self.beta if self.total is None else min(self.total, self.alpha + self.beta)
        if size + nx + pending + far > cap or size + len(empty) > self.alpha:
            return
        if not self._consistent(parts, excl):
            return
        if not all(parts) and not self._fillable(parts, cand):
            return
        # resolve a vertex touching two parts first; otherwise branch on the smallest
        pick = None
        for c in iter_bits(cand):
            nc = g.nbr(c)
            hits = 0
            for p in parts:
                if nc & p:
                    hits += 1
            if hits >= 2:
                pick = c
                break
        vid = pick if pick is not None else (cand & -cand).bit_length() - 1
        v = 1 << vid
        nv = g.nbr(vid)
        touched = [i for i in range(self.r) if nv & parts[i]]
        lo, hi = touched[0], touched[-1]
        if hi - lo >= 3:
            return
        if hi - lo == 2:
            options = [lo + 1]
        elif hi - lo == 1:
            options = [lo, hi]
        else:
            options = [-1, lo - 1, lo, lo + 1]
        for j in options:
            if j == -1:
                self._grow(parts, union, excl | v, mu)
                continue
            if j < 0 or j >= self.r or (j == 0 and v & self.block1):
                continue
            if not self._placeable(parts, excl, vid, j):
                continue
            parts[j] |= v
            self._grow(parts, union | v, excl, mu)
            parts[j] &= ~v

    def _fillable(self, parts: list[int], cand: int) -> bool:
        """Each run of empty parts must border, or contain, a part that can still grow."""
        g, r = self.g, self.r
        live = [False] * r
        for c in iter_bits(cand):
            nc = g.nbr(c)
            t = [i for i in range(r) if nc & parts[i]]
            lo, hi = t[0], t[-1]
            if hi - lo >= 3:
                return False
            for j in range(max(0, hi - 1), min(r, lo + 2)):
                live[j] = True
        i = 0
        while i < r:
            if parts[i]:
                i += 1
                continue
            j = i
            while j < r and not parts[j]:
                j += 1
            ok = any(live[i:j]) or (i > 0 and live[i - 1]) or (j < r and live[j])
            if not ok:
                return False
            i = j
        return True

    def _consistent(self, parts: list[int], excl: int) -> bool:
        """Excluded vertices touch one part each, adjacent ones touch nearby parts."""
        g = self.g
        where: dict[int, int] = {}
        for x in iter_bits(excl):
            nx = g.nbr(x)
            idx = -1
            for i, p in enumerate(parts):
                if nx & p:
                    if idx >= 0:
                        return False
                    idx = i
            where[x] = idx
        for x, i in where.items():
            for y in iter_bits(g.nbr(x) & excl):
                if y > x and abs(where[y] - i) >= 2:
                    return False
        return True

    def _placeable(self, parts: list[int], excl: int, vid: int, j: int) -> bool:
        # an excluded neighbour of v must keep touching a single part
        g = self.g
        for x in iter_bits(g.nbr(vid) & excl):
            nx = g.nbr(x)
            for i in range(self.r):
                if i != j and nx & parts[i]:
                    return False
        return True


def _finish(found: Iterable[tuple[int, ...]]) -> list[RSlab]:
    return [RSlab(m) for m in sorted(found, key=lambda ms: tuple(to_tuple(x) for x in ms))]


def enumerate_seeded(g: Graph, seed: Sequence[Iterable[int]], alpha: int, beta: int, *,
                     forbidden: Iterable[int] | int = 0, total: Optional[int] = None) -> list[RSlab]:
    """All r-slabs with Q_i inside A_i, |A| <= alpha and |N(A) - forbidden| <= beta.

    Vertices in ``forbidden`` never enter A and are not charged to ``beta``;
    ``total`` optionally bounds |A| + |N(A) - forbidden|.
    """
    fmask = forbidden if isinstance(forbidden, int) else mask_of(forbidden)
    parts = [p if isinstance(p, int) else mask_of(p) for p in seed]
    if not parts:
        return []
    s = _Search(g, len(parts), alpha, beta, fmask, 0, total)
    s.run(parts)
    return _finish(s.found)


def enumerate_all(g: Graph, r: int, alpha: int, beta: int, *,
                  total: Optional[int] = None) -> list[RSlab]:
    """Every r-slab of ``g`` with |A| <= alpha and |N(A)| <= beta.

    ``total`` optionally bounds |A| + |N(A)| as well.
    """
    if r < 1:
        raise ValueError("r must be positive")
    found: set[tuple[int, ...]] = set()
    for v in g.vertices():
        # A_1 is found from its smallest vertex only
        s = _Search(g, r, alpha, beta, 0, (1 << v) - 1, total)
        s.run([1 << v] + [0] * (r - 1))
        found |= s.found
    return _finish(found)


def enumerate_connected_sets(g: Graph, q: Iterable[int], alpha: int, beta: int) -> list[tuple[int, ...]]:
    """Connected supersets A of ``q`` with |A| <= alpha and |N(A)| <= beta."""
    return [sl.parts[0] for sl in enumerate_seeded(g, [q], alpha, beta)]


def count_nodes_seeded(g: Graph, seed: Sequence[int], alpha: int, beta: int, *,
                       forbidden: int = 0, total: Optional[int] = None) -> tuple[list[RSlab], int]:
    """Like :func:`enumerate_seeded` on masks, also returning the search-node count."""
    s = _Search(g, len(seed), alpha, beta, forbidden, 0, total)
    s.run(list(seed))
    return _finish(s.found), s.nodes
