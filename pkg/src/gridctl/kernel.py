"""Polynomial kernel: degree rules and contraction of rows inside tall grid separators.

A (p x t)-grid-separator is an induced p x t grid whose removal leaves exactly
two components, each with at least k + 1 vertices, attached only to the first
and last grid row respectively. Two consecutive internal rows of such a grid
can be contracted together without changing the answer when p = 4k + 6.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ._bits import mask_of
from .graph import Graph, GraphError, component_masks, contract_edges, nbr_mask, recognize_grid, shortest_path_counts
from .grid import find_row_separator_grid

__all__ = [
    "GridSeparator",
    "KernelReport",
    "k_o",
    "kernel_bound",
    "apply_rr2",
    "find_grid_separator",
    "check_grid_separator",
    "apply_rr3",
    "kernelize",
]

NO_INSTANCE = "NO-instance"
KERNEL = "kernel"


def k_o(k: int) -> int:
    return (4 * k + 8) * (k + 1) + 1


def kernel_bound(k: int) -> int:
    return k_o(k) ** 2 + k + 1


@dataclass(frozen=True)
class GridSeparator:
    cells: tuple[tuple[int, ...], ...]  # cells[i][j]: row i, column j (0-based)

    @property
    def p(self) -> int:
        return len(self.cells)

    @property
    def t(self) -> int:
        return len(self.cells[0])

    @property
    def mask(self) -> int:
        return mask_of(v for row in self.cells for v in row)


@dataclass
class KernelReport:
    outcome: str
    kernel_graph: Optional[Graph]
    k: int
    rr3_applications: int
    k_o: int
    reason: str = ""

    @property
    def bound(self) -> int:
        return self.k_o ** 2 + self.k + 1


def apply_rr2(g: Graph, k: int) -> str:
    """'NO' when some degree exceeds k + 5 or more than 6k vertices have degree at least 6."""
    big = 0
    for v in g.vertices():
        d = g.degree(v)
        if d > k + 5:
            return "NO"
        if d >= 6:
            big += 1
    return "NO" if big > 6 * k else "pass"


def check_grid_separator(g: Graph, k: int, sep: GridSeparator) -> Optional[str]:
    """None when ``sep`` is a valid grid separator, otherwise the violated property."""
    p, t = sep.p, sep.t
    flat = [v for row in sep.cells for v in row]
    if any(len(row) != t for row in sep.cells) or len(set(flat)) != p * t:
        return "cells are not p x t distinct vertices"
    pos = {v: (i, j) for i, row in enumerate(sep.cells) for j, v in enumerate(row)}
    s = sep.mask
    edges = 0
    for v in flat:
        for w in (x for x in pos if g.has_edge(v, x)):
            (i, j), (a, b) = pos[v], pos[w]
            if abs(i - a) + abs(j - b) != 1:
                return "cells do not induce the grid"
            edges += 1
    if edges // 2 != 2 * p * t - p - t:
        return "cells do not induce the grid"
    comps = component_masks(g, g.full_mask & ~s)
    if len(comps) != 2:
        return f"removing the cells leaves {len(comps)} components"
    first, last = mask_of(sep.cells[0]), mask_of(sep.cells[-1])
    a, b = comps
    if nbr_mask(g, a) != first:
        a, b = b, a
    if nbr_mask(g, a) != first or nbr_mask(g, b) != last:
        return "components must attach to the first and last rows only"
    if min(a.bit_count(), b.bit_count()) < k + 1:
        return "a component has fewer than k + 1 vertices"
    return None


def _assemble(g: Graph, path: tuple[int, ...], p: int) -> Optional[GridSeparator]:
    rows: list[tuple[int, ...]] = []
    for i in range(0, p - 1, 2):
        strip = find_row_separator_grid(g, path[i], path[i + 1])
        if strip is None:
            return None
        if rows and len(strip[0]) != len(rows[0]):
            return None
        rows.extend(strip)
    return GridSeparator(tuple(rows))


def find_grid_separator(g: Graph, k: int, p: int, t_min: int = 1) -> Optional[GridSeparator]:
    """Widest (p x t)-grid-separator with t >= t_min found from anchor pairs, or None.

    Anchors are vertex pairs u_1, u_p joined by a unique shortest path on p
    vertices; that path is the first column and 2-row strips are grown from
    its consecutive pairs.
    """
    if p < 2 or p % 2:
        raise ValueError("p must be even and at least 2")
    best: Optional[GridSeparator] = None
    for u in g.vertices():
        dist, count = shortest_path_counts(g, u)
        for v in g.vertices():
            if dist[v] != p - 1 or count[v] != 1:
                continue
            path = _path(g, dist, u, v)
            sep = _assemble(g, path, p)
            if sep is None or sep.t < t_min or (best is not None and sep.t <= best.t):
                continue
            if check_grid_separator(g, k, sep) is None:
                best = sep
    return best


def _path(g: Graph, dist: list[int], u: int, v: int) -> tuple[int, ...]:
    out = [v]
    while out[-1] != u:
        x = out[-1]
        out.append(next(w for w in g.neighbors(x) if dist[w] == dist[x] - 1))
    return tuple(reversed(out))


def apply_rr3(g: Graph, k: int, sep: GridSeparator) -> Graph:
    return apply_rr3_mapped(g, k, sep)[0]


def apply_rr3_mapped(g: Graph, k: int, sep: GridSeparator) -> tuple[Graph, dict[int, int]]:
    """Contract rows p//2 and p//2 + 1 (1-based) of the separator column by column."""
    if sep.p < 4:
        raise GraphError("a grid separator needs at least 4 rows for this rule")
    problem = check_grid_separator(g, k, sep)
    if problem is not None:
        raise GraphError(f"not a grid separator: {problem}")
    mid = sep.p // 2 - 1
    pairs = list(zip(sep.cells[mid], sep.cells[mid + 1]))
    return contract_edges(g, pairs)


def kernelize(g: Graph, k: int) -> KernelReport:
    ko = k_o(k)
    bound = ko ** 2 + k + 1
    if g.n == 0 or not g.is_connected():
        return KernelReport(NO_INSTANCE, None, k, 0, ko, "disconnected")
    if apply_rr2(g, k) == "NO":
        return KernelReport(NO_INSTANCE, None, k, 0, ko, "degree rule")
    if k <= 0 and recognize_grid(g) is None:
        return KernelReport(NO_INSTANCE, None, k, 0, ko, "k = 0 and not a grid")
    applied = 0
    p = 4 * k + 6
    while g.n > bound:
        sep = find_grid_separator(g, k, p)
        if sep is None:
            return KernelReport(NO_INSTANCE, None, k, applied, ko, "no grid separator")
        g = apply_rr3(g, k, sep)
        applied += 1
        if apply_rr2(g, k) == "NO":
            return KernelReport(NO_INSTANCE, None, k, applied, ko, "degree rule")
    return KernelReport(KERNEL, g, k, applied, ko)
