"""Instance generators: hardness reductions and planted grid-contraction instances."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, GraphError, WitnessMap, build_grid, from_edge_list

__all__ = [
    "CnfFormula",
    "NaeFormula",
    "Hypergraph",
    "C4Instance",
    "sat3_to_nae",
    "nae_to_hypergraph",
    "hypergraph_to_c4_instance",
    "split_grid",
    "random_graph",
    "nae_family",
]


def _check_clauses(n: int, clauses: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    out = []
    for c in clauses:
        c = tuple(int(l) for l in c)
        if not c:
            raise ValueError("empty clause")
        for l in c:
            if l == 0 or abs(l) > n:
                raise ValueError(f"literal {l} outside 1..{n}")
        out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", _check_clauses(self.variable_count, self.clauses))

    def satisfiable(self) -> bool:
        n = self.variable_count
        return any(all(any((bits >> (abs(l) - 1) & 1) == (l > 0) for l in c) for c in self.clauses)
                   for bits in range(1 << n))


@dataclass(frozen=True)
class NaeFormula:
    variable_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", _check_clauses(self.variable_count, self.clauses))


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        edges = []
        for e in self.edges:
            e = tuple(sorted(set(int(v) for v in e)))
            if not e:
                raise ValueError("empty hyperedge")
            if e[0] < 1 or e[-1] > self.vertex_count:
                raise ValueError(f"hyperedge {e} leaves 1..{self.vertex_count}")
            edges.append(e)
        object.__setattr__(self, "edges", tuple(edges))


def sat3_to_nae(f: CnfFormula) -> NaeFormula:
    """Add one shared fresh variable to every clause.

    A satisfying assignment with s false is NAE; conversely an NAE assignment
    can be flipped so that s is false, and then every clause has a true literal.
    """
    s = f.variable_count + 1
    return NaeFormula(s, tuple(c + (s,) for c in f.clauses))


def nae_to_hypergraph(f: NaeFormula) -> Hypergraph:
    """Literal vertices: variable x gives 2x - 1 (positive) and 2x (negative)."""
    def lit(l: int) -> int:
        return 2 * l - 1 if l > 0 else -2 * l
    edges = [(2 * x - 1, 2 * x) for x in range(1, f.variable_count + 1)]
    edges += [tuple(lit(l) for l in c) for c in f.clauses]
    return Hypergraph(2 * f.variable_count, tuple(edges))


@dataclass(frozen=True)
class C4Instance:
    graph: Graph
    k: int
    hypergraph: Hypergraph
    added_universal: bool
    duplicated_universal: bool


def hypergraph_to_c4_instance(h: Hypergraph) -> C4Instance:
    """Graph that contracts to C4 within k = |V| - 4 steps iff ``h`` is 2-colourable.

    Layout: hypergraph vertices 1..n form a clique X; hyperedge i gets e_1 in
    E1 and e_2 in E2, with E1 and E2 complete to each other; v_x ~ e_1, e_2
    whenever x lies in the hyperedge; apex v1 sees E1, apex v2 sees E2, v1 ~ v2.
    A hyperedge covering every vertex is appended when missing, and repeated
    when that still leaves fewer than two hyperedges.
    """
    n = h.vertex_count
    if n == 0:
        raise ValueError("the hypergraph has no vertices")
    edges = list(h.edges)
    universal = tuple(range(1, n + 1))
    added = universal not in edges
    if added:
        edges.append(universal)
    duplicated = len(edges) < 2
    if duplicated:
        edges.append(universal)
    m = len(edges)
    first = [n + 1 + i for i in range(m)]
    second = [n + 1 + m + i for i in range(m)]
    v1, v2 = n + 2 * m + 1, n + 2 * m + 2
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    pairs += [(a, b) for a in first for b in second]
    for i, e in enumerate(edges):
        for x in e:
            pairs.append((x, first[i]))
            pairs.append((x, second[i]))
        pairs.append((v1, first[i]))
        pairs.append((v2, second[i]))
    pairs.append((v1, v2))
    total = n + 2 * m + 2
    return C4Instance(from_edge_list(total, pairs), total - 4, Hypergraph(n, tuple(edges)), added, duplicated)


def split_grid(r: int, q: int, k: int, seed: int) -> tuple[Graph, int, WitnessMap]:
    """Grid r x q with k random vertex splits, and the planted witness map.

    A split picks a vertex v, creates a new vertex v' adjacent to v and moves
    a random subset of N(v) over to v'. The new vertex inherits v's cell.
    """
    if r < 1 or q < 1:
        raise GraphError("grid dimensions must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    rng = random.Random(seed)
    g = build_grid(r, q)
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    cell = {v: ((v - 1) // q + 1, (v - 1) % q + 1) for v in g.vertices()}
    for _ in range(k):
        v = rng.randint(1, len(adj))
        new = len(adj) + 1
        nb = sorted(adj[v])
        moved = {u for u in nb if rng.random() < 0.5}
        adj[new] = set()
        for u in moved:
            adj[v].discard(u)
            adj[u].discard(v)
            adj[u].add(new)
            adj[new].add(u)
        adj[v].add(new)
        adj[new].add(v)
        cell[new] = cell[v]
    edges = [(u, w) for u in adj for w in adj[u] if u < w]
    out = from_edge_list(len(adj), edges)
    return out, k, WitnessMap(r, q, cell)


def random_graph(n: int, m: int, seed: int, connected: bool = False, max_tries: int = 100_000) -> Graph:
    """Uniform simple graph with n vertices and m edges."""
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    if not 0 <= m <= len(pairs):
        raise ValueError(f"m={m} out of range for n={n}")
    if connected and n > 1 and m < n - 1:
        raise ValueError("too few edges for a connected graph")
    rng = random.Random(seed)
    for _ in range(max_tries):
        g = from_edge_list(n, rng.sample(pairs, m))
        if not connected or n == 0 or g.is_connected():
            return g
    raise RuntimeError("could not sample a connected graph")


def _clause_pool(n: int) -> list[tuple[int, ...]]:
    pool = []
    for size in (1, 2, 3):
        for vs in itertools.combinations(range(1, n + 1), size):
            for signs in itertools.product((1, -1), repeat=size):
                pool.append(tuple(s * v for s, v in zip(signs, vs)))
    return pool


def _canonical_clauses(n: int, clauses) -> tuple[tuple[int, ...], ...]:
    # least image under renaming variables and flipping polarities
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        for pol in itertools.product((1, -1), repeat=n):
            img = tuple(sorted(
                tuple(sorted((pol[abs(l) - 1] * perm[abs(l) - 1] * (1 if l > 0 else -1) for l in c), key=abs))
                for c in clauses))
            if best is None or img < best:
                best = img
    return best


def nae_family(max_vars: int = 3, max_clauses: int = 3) -> list[NaeFormula]:
    """Every NAE formula on 1..max_vars variables with at most max_clauses clauses.

    Clauses use 1 to 3 distinct variables and may repeat. Formulas equal up to
    renaming variables or flipping a variable's polarity are listed once, so
    one, two and three variables give 6, 31 and 136 formulas.
    """
    out = []
    for n in range(1, max_vars + 1):
        pool = _clause_pool(n)
        seen = set()
        for m in range(max_clauses + 1):
            for combo in itertools.combinations_with_replacement(pool, m):
                key = _canonical_clauses(n, combo)
                if key not in seen:
                    seen.add(key)
                    out.append(NaeFormula(n, key))
    return out
