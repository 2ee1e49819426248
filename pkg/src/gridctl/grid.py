"""Full grid-contraction decision: path check, bounded solves, and row-pair reduction.

For a guessed shape r x q and corner vertices x1..x4, a horizontal
decomposition is a 2 x q induced grid (rows Su, Sv) separating the part of
the graph holding x1, x2 from the part holding x3, x4. Contracting every
u_j v_j (the row-pair reduction) removes one row from the target while
keeping the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Optional

from ._bits import iter_bits, mask_of, to_tuple
from .bounded import NO, YES, SolveResult, SolveStats, solve_annotated, solve_bounded, solve_path
from .graph import (
    Corners,
    Graph,
    GraphError,
    WitnessMap,
    component_masks,
    contract_edges,
    nbr_mask,
)
from .oracle import verify_witness

__all__ = [
    "HorizontalDecomposition",
    "GuessInstance",
    "RR1Result",
    "find_row_separator_grid",
    "find_horizontal_decomposition",
    "apply_rr1",
    "lift_rr1",
    "enumerate_guesses",
    "corner_symmetries",
    "solve",
]


@dataclass(frozen=True)
class HorizontalDecomposition:
    C12: tuple[int, ...]
    Su: tuple[int, ...]
    Sv: tuple[int, ...]
    C34: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.Su)


@dataclass(frozen=True)
class GuessInstance:
    r: int
    q: int
    corners: Corners


@dataclass(frozen=True)
class RR1Result:
    graph: Graph
    label: dict
    k: int
    r: int
    q: int
    corners: Corners


# --------------------------------------------------------------------------
# separator grids


def _is_separator(g: Graph, row: int) -> bool:
    return len(component_masks(g, g.full_mask & ~row)) >= 2


def _pair_candidates(g: Graph, us: list[int], vs: list[int], used: int) -> list[tuple[int, int]]:
    u, v = us[-1], vs[-1]
    prev = used & ~((1 << u) | (1 << v))
    out = []
    for a in iter_bits(g.nbr(u) & ~used):
        if g.has_edge(a, v) or g.nbr(a) & prev:
            continue
        for b in iter_bits(g.nbr(v) & g.nbr(a) & ~used):
            if g.has_edge(b, u) or g.nbr(b) & prev:
                continue
            out.append((a, b))
    return out


def find_row_separator_grid(g: Graph, u1: int, v1: int, branching: bool = False
                            ) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Grow a 2 x q induced grid from the column (u1, v1) and return its rows.

    Growth takes the unique next column at each step and gives up when the
    choice is ambiguous. With ``branching`` every choice is explored and the
    first maximal grid whose rows both separate ``g`` is returned.
    """
    if not g.has_edge(u1, v1):
        return None

    def accept(us: list[int], vs: list[int]) -> bool:
        return _is_separator(g, mask_of(us)) and _is_separator(g, mask_of(vs))

    if not branching:
        us, vs = [u1], [v1]
        used = (1 << u1) | (1 << v1)
        while True:
            cand = _pair_candidates(g, us, vs, used)
            if not cand:
                break
            if len(cand) > 1:
                return None
            a, b = cand[0]
            us.append(a)
            vs.append(b)
            used |= (1 << a) | (1 << b)
        return (tuple(us), tuple(vs)) if accept(us, vs) else None

    seen: set[tuple[int, int, int]] = set()
    stack = [([u1], [v1], (1 << u1) | (1 << v1))]
    while stack:
        us, vs, used = stack.pop()
        state = (used, us[-1], vs[-1])
        if state in seen:
            continue
        seen.add(state)
        cand = _pair_candidates(g, us, vs, used)
        if not cand:
            if accept(us, vs):
                return tuple(us), tuple(vs)
            continue
        for a, b in reversed(cand):
            stack.append((us + [a], vs + [b], used | (1 << a) | (1 << b)))
    return None


_DECOMP_CACHE: dict[tuple[Graph, bool], list[tuple[int, int, int, int, tuple, tuple]]] = {}


def _decompositions(g: Graph, branching: bool) -> list[tuple[int, int, int, int, tuple, tuple]]:
    """Every (C12, C34, Su, Sv) split obtainable from an oriented edge, corner-free."""
    key = (g, branching)
    hit = _DECOMP_CACHE.get(key)
    if hit is not None:
        return hit
    if len(_DECOMP_CACHE) > 64:
        _DECOMP_CACHE.clear()
    out = []
    seen = set()
    for a, b in g.edges():
        for u1, v1 in ((a, b), (b, a)):
            rows = find_row_separator_grid(g, u1, v1, branching)
            if rows is None:
                continue
            su, sv = mask_of(rows[0]), mask_of(rows[1])
            comps = component_masks(g, g.full_mask & ~(su | sv))
            if len(comps) != 2:
                continue
            for c12, c34 in (comps, comps[::-1]):
                if nbr_mask(g, c12) == su and nbr_mask(g, c34) == sv:
                    sig = (c12, su, sv, c34)
                    if sig not in seen:
                        seen.add(sig)
                        out.append((c12, su, sv, c34, rows[0], rows[1]))
    _DECOMP_CACHE[key] = out
    return out


def find_horizontal_decomposition(g: Graph, c: Corners, branching: bool = False
                                  ) -> Optional[HorizontalDecomposition]:
    for c12, su, sv, c34, us, vs in _decompositions(g, branching):
        if all(c12 >> x & 1 for x in (c.x1, c.x2)) and all(c34 >> x & 1 for x in (c.x3, c.x4)):
            return HorizontalDecomposition(to_tuple(c12), us, vs, to_tuple(c34))
    return None


def check_decomposition(g: Graph, d: HorizontalDecomposition, c: Optional[Corners] = None) -> None:
    """Raise GraphError naming the first violated decomposition invariant."""
    c12, c34 = mask_of(d.C12), mask_of(d.C34)
    su, sv = mask_of(d.Su), mask_of(d.Sv)
    if not (c12 and c34 and su and sv):
        raise GraphError("decomposition parts must be nonempty")
    if len(d.Su) != len(d.Sv):
        raise GraphError("rows Su and Sv differ in length")
    if c12 & c34 or (c12 | c34) & (su | sv) or su & sv or (c12 | c34 | su | sv) != g.full_mask:
        raise GraphError("decomposition parts do not partition the vertex set")
    q = len(d.Su)
    for j in range(q):
        if not g.has_edge(d.Su[j], d.Sv[j]):
            raise GraphError(f"u_{j + 1} and v_{j + 1} are not adjacent")
    expected = 3 * q - 2
    got = sum(1 for x in iter_bits(su | sv) for y in iter_bits(g.nbr(x) & (su | sv)) if x < y)
    for j in range(q - 1):
        if not (g.has_edge(d.Su[j], d.Su[j + 1]) and g.has_edge(d.Sv[j], d.Sv[j + 1])):
            raise GraphError("rows are not paths in column order")
    if got != expected:
        raise GraphError("Su and Sv do not induce a 2 x q grid")
    comps = component_masks(g, c12 | c34)
    if sorted(comps) != sorted([c12, c34]):
        raise GraphError("C12 and C34 are not the two components left by the rows")
    if nbr_mask(g, c12) != su or nbr_mask(g, c34) != sv:
        raise GraphError("N(C12) must equal Su and N(C34) must equal Sv")
    if c is not None:
        if not (c12 >> c.x1 & 1 and c12 >> c.x2 & 1 and c34 >> c.x3 & 1 and c34 >> c.x4 & 1):
            raise GraphError("corners x1, x2 must lie in C12 and x3, x4 in C34")


def apply_rr1(g: Graph, d: HorizontalDecomposition, k: int, r: int, q: int, c: Corners) -> RR1Result:
    """Contract every u_j v_j; the instance keeps k, q and the corners and loses a row."""
    check_decomposition(g, d, c)
    if len(d.Su) != q:
        raise GraphError("decomposition width differs from q")
    h, label = contract_edges(g, list(zip(d.Su, d.Sv)))
    return RR1Result(h, label, k, r - 1, q, Corners(*(label[x] for x in c)))


def lift_rr1(g: Graph, d: HorizontalDecomposition, label: dict, w: WitnessMap, k: int) -> Optional[WitnessMap]:
    """Split the row holding the contracted pairs back into two rows, if that works."""
    rows = {w.assign[label[u]][0] for u in d.Su}
    if len(rows) != 1:
        return None
    ro = rows.pop()
    upper = mask_of(d.C12) | mask_of(d.Su)
    assign = {}
    for v in g.vertices():
        i, j = w.assign[label[v]]
        if i < ro:
            assign[v] = (i, j)
        elif i > ro:
            assign[v] = (i + 1, j)
        else:
            assign[v] = (ro, j) if upper >> v & 1 else (ro + 1, j)
    lifted = WitnessMap(w.rows + 1, w.cols, assign)
    return lifted if verify_witness(g, lifted, k).ok else None


# --------------------------------------------------------------------------
# guesses


def _compose(p: tuple[int, ...], s: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[i] for i in s)


def corner_symmetries(square: bool) -> list[tuple[int, ...]]:
    """Position permutations of (x1, x2, x3, x4) induced by grid symmetries.

    Corners sit at t1 = (1,1), t2 = (1,q), t3 = (r,q), t4 = (r,1); a tuple is
    mapped to ``tuple(x[i] for i in perm)``.
    """
    gens = [(1, 0, 3, 2), (3, 2, 1, 0)]
    if square:
        gens.append((0, 3, 2, 1))
    group = {(0, 1, 2, 3)}
    frontier = list(group)
    while frontier:
        p = frontier.pop()
        for s in gens:
            c = _compose(p, s)
            if c not in group:
                group.add(c)
                frontier.append(c)
    return sorted(group)


def _canonical(x: tuple[int, ...], syms: list[tuple[int, ...]]) -> bool:
    return all(_compose(x, s) >= x for s in syms)


def _shapes(n: int, k: int) -> list[tuple[int, int]]:
    return [(r, q) for r in range(2, n + 1) for q in range(r, n + 1) if n - k <= r * q <= n]


def enumerate_guesses(g: Graph, k: int) -> list[GuessInstance]:
    """(r, q, corners) with 2 <= r <= q, |V| - k <= rq <= |V|, one corner tuple per symmetry orbit."""
    return list(_iter_guesses(g, k))


def _iter_guesses(g: Graph, k: int, r_only: Optional[int] = None,
                  allowed: Optional[int] = None) -> Iterator[GuessInstance]:
    verts = [v for v in g.vertices() if allowed is None or allowed >> v & 1]
    for r, q in _shapes(g.n, k):
        if r_only is not None and r != r_only:
            continue
        syms = corner_symmetries(r == q)
        for x in permutations(verts, 4):
            if _canonical(x, syms):
                yield GuessInstance(r, q, Corners(*x))


# --------------------------------------------------------------------------
# the decision procedure


def _reduce_and_solve(g: Graph, k: int, guess: GuessInstance, branching: bool, stats: SolveStats
                      ) -> Optional[SolveResult]:
    cur, r, c = g, guess.r, guess.corners
    steps: list[tuple[Graph, HorizontalDecomposition, dict]] = []
    while r >= 2 * k + 5:
        d = find_horizontal_decomposition(cur, c, branching)
        if d is None or len(d.Su) != guess.q:
            break
        red = apply_rr1(cur, d, k, r, guess.q, c)
        steps.append((cur, d, red.label))
        cur, r, c = red.graph, red.r, red.corners
    res = solve_annotated(cur, k, r, guess.q, c)
    stats.merge(res.stats)
    if not res.yes:
        return None
    w: Optional[WitnessMap] = res.certificate
    for prev, d, label in reversed(steps):
        w = lift_rr1(prev, d, label, w, k)
        if w is None:
            break
    if w is not None:
        return SolveResult(YES, w, stats)
    composed = {v: v for v in g.vertices()}
    for _, _, label in steps:
        composed = {v: label[x] for v, x in composed.items()}
    return SolveResult(YES, res.certificate, stats, reduced_graph=cur, reduction_map=composed)


def solve(g: Graph, k: int, branching: bool = False) -> SolveResult:
    """Is ``g`` k-contractible to some grid (paths included)?"""
    if k < 0:
        raise ValueError("k must be nonnegative")
    stats = SolveStats()
    if g.n == 0 or not g.is_connected():
        return SolveResult(NO, None, stats)
    res = solve_path(g, k)
    stats.merge(res.stats)
    if res.yes:
        return SolveResult(YES, res.certificate, stats)
    rows = sorted({r for r, _ in _shapes(g.n, k)})
    for r in rows:
        if r < 2 * k + 5:
            res = solve_bounded(g, k, r)
            stats.merge(res.stats)
            if res.yes:
                return SolveResult(YES, res.certificate, stats)
            continue
        # a corner vertex has at most k + 2 neighbours: its cell and the two
        # neighbouring cells hold at most k + 3 vertices together
        low = mask_of(v for v in g.vertices() if g.degree(v) <= k + 2)
        for guess in _iter_guesses(g, k, r_only=r, allowed=low):
            out = _reduce_and_solve(g, k, guess, branching, stats)
            if out is not None:
                return out
    return SolveResult(NO, None, stats)
