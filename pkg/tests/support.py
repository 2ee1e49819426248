"""Independent reference implementations and corpora shared by the tests.

Everything here works on plain Python sets and adjacency dicts so that it
shares no code path with the package internals it is used to check.
"""

from __future__ import annotations

import itertools
import random

from gridctl.graph import Graph, from_edge_list
from gridctl.instances import random_graph


def adjacency(g: Graph) -> dict[int, set[int]]:
    return {v: set(g.neighbors(v)) for v in g.vertices()}


def connected(adj: dict[int, set[int]], verts: set[int]) -> bool:
    if not verts:
        return False
    start = next(iter(verts))
    seen, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for y in adj[x] & verts:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == verts


def closed_out(adj, part: set[int], a: set[int]) -> set[int]:
    return set().union(*(adj[v] for v in part)) - a


def brute_slabs(g: Graph, r: int) -> dict[tuple[frozenset, ...], tuple[int, int]]:
    """Every r-slab of ``g`` by labelling each vertex with 0 (outside) or a part 1..r.

    Maps the tuple of parts to (|A|, |N(A)|).
    """
    adj = adjacency(g)
    verts = list(g.vertices())
    out = {}
    for labels in itertools.product(range(r + 1), repeat=len(verts)):
        parts = [set() for _ in range(r)]
        for v, l in zip(verts, labels):
            if l:
                parts[l - 1].add(v)
        if not all(parts):
            continue
        a = set().union(*parts)
        if not connected(adj, a) or not all(connected(adj, p) for p in parts):
            continue
        ok = True
        for i, j in itertools.combinations(range(r), 2):
            touch = any(adj[v] & parts[j] for v in parts[i])
            if touch != (j - i == 1):
                ok = False
                break
        if not ok:
            continue
        outs = [closed_out(adj, p, a) for p in parts]
        for i, j in itertools.combinations(range(r), 2):
            if outs[i] & outs[j] or (j - i > 1 and any(adj[v] & outs[j] for v in outs[i])):
                ok = False
                break
        if ok:
            out[tuple(frozenset(p) for p in parts)] = (len(a), len(set().union(*outs)))
    return out


def slab_key(slab) -> tuple[frozenset, ...]:
    return tuple(frozenset(p) for p in slab.parts)


def small_corpus(count: int, seed: int, max_n: int = 8, max_m: int | None = None) -> list[Graph]:
    """Connected graphs on 1..max_n vertices, reproducible from ``seed``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_n)
        lo = n - 1
        hi = n * (n - 1) // 2
        if max_m is not None:
            hi = min(hi, max_m)
        if lo > hi:
            continue
        m = rng.randint(lo, hi)
        out.append(random_graph(n, m, rng.randrange(1 << 30), connected=True))
    return out


def cycle(n: int) -> Graph:
    return from_edge_list(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> Graph:
    return from_edge_list(leaves + 1, [(1, i) for i in range(2, leaves + 2)])
