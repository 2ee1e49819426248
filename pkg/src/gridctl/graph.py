"""Simple undirected graphs on vertices ``1..n`` and the grid vocabulary built on them.

Graphs are immutable. Vertex sets travel through the algorithms as integer
bitmasks (bit ``v`` for vertex ``v``) and leave public functions as sorted
tuples, which double as their canonical encoding.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from ._bits import iter_bits, lowest, mask_of, to_tuple

VertexSet = tuple[int, ...]
Cell = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graphs, edge sets and witness data."""


class Graph:
    """Immutable simple graph with dense vertex identifiers ``1..n``."""

    __slots__ = ("n", "_nbr", "_m")

    def __init__(self, n: int, nbr: Sequence[int]):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        if len(nbr) != n + 1:
            raise GraphError("neighbour table must have n + 1 entries")
        self.n = n
        self._nbr = tuple(nbr)
        self._m = sum(x.bit_count() for x in self._nbr) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return from_edge_list(n, edges)

    @property
    def m(self) -> int:
        return self._m

    @property
    def full_mask(self) -> int:
        return (1 << (self.n + 1)) - 2

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def nbr(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask."""
        return self._nbr[v]

    def neighbors(self, v: int) -> VertexSet:
        return to_tuple(self._nbr[v])

    def degree(self, v: int) -> int:
        return self._nbr[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._nbr[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(1, self.n + 1):
            for v in iter_bits(self._nbr[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def is_connected(self) -> bool:
        return self.n > 0 and component_of(self, 1 << 1, self.full_mask) == self.full_mask

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._nbr == other._nbr

    def __hash__(self) -> int:
        return hash((self.n, self._nbr))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph; duplicate pairs collapse, self-loops and bad ids raise."""
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    nbr = [0] * (n + 1)
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    return Graph(n, nbr)


# --------------------------------------------------------------------------
# mask-level primitives shared by the solvers


def nbr_mask(g: Graph, mask: int) -> int:
    """Open neighbourhood N(mask) as a bitmask."""
    out = 0
    nbr = g._nbr
    for v in iter_bits(mask):
        out |= nbr[v]
    return out & ~mask


def component_of(g: Graph, start: int, allowed: int) -> int:
    """Vertices of ``allowed`` reachable from the ``start`` mask inside ``allowed``."""
    nbr = g._nbr
    comp = start & allowed
    frontier = comp
    while frontier:
        grow = 0
        for v in iter_bits(frontier):
            grow |= nbr[v]
        frontier = grow & allowed & ~comp
        comp |= frontier
    return comp


def component_masks(g: Graph, allowed: int) -> list[int]:
    """Connected components of G[allowed], ordered by smallest member."""
    out = []
    rest = allowed
    while rest:
        comp = component_of(g, rest & -rest, allowed)
        out.append(comp)
        rest &= ~comp
    return out


def is_connected_mask(g: Graph, mask: int) -> bool:
    return bool(mask) and component_of(g, mask & -mask, mask) == mask


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Distances from ``source``; -1 marks unreachable vertices. Index 0 unused."""
    dist = [-1] * (g.n + 1)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in iter_bits(g._nbr[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    """Diameter of a connected graph; raises on disconnected input."""
    best = 0
    for v in g.vertices():
        d = bfs_distances(g, v)
        if min(d[1:]) < 0:
            raise GraphError("diameter of a disconnected graph")
        best = max(best, max(d[1:]))
    return best


def quotient(g: Graph, label: Mapping[int, int], p: int) -> Graph:
    """Graph on ``1..p`` whose vertex ``label[v]`` absorbs every ``v``."""
    nbr = [0] * (p + 1)
    for u, v in g.edges():
        a, b = label[u], label[v]
        if a != b:
            nbr[a] |= 1 << b
            nbr[b] |= 1 << a
    return Graph(p, nbr)


# --------------------------------------------------------------------------
# public operations


def components(g: Graph, excluded: Iterable[int] = ()) -> list[VertexSet]:
    return [to_tuple(c) for c in component_masks(g, g.full_mask & ~mask_of(excluded))]


def boundary(g: Graph, s: Iterable[int]) -> VertexSet:
    """Vertices of ``s`` with a neighbour outside ``s``."""
    sm = mask_of(s)
    return tuple(v for v in iter_bits(sm) if g.nbr(v) & ~sm)


def neighborhood(g: Graph, s: Iterable[int]) -> VertexSet:
    return to_tuple(nbr_mask(g, mask_of(s)))


def contract_edges(g: Graph, edges: Iterable[tuple[int, int]]) -> tuple[Graph, dict[int, int]]:
    """Contract every component of (V(F), F); returns the graph and old -> new ids.

    New identifiers are dense and follow the smallest original member of each class.
    """
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        if not (1 <= u <= g.n and 1 <= v <= g.n) or not g.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge of the graph")
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    label: dict[int, int] = {}
    new_id: dict[int, int] = {}
    for v in g.vertices():
        root = find(v)
        if root not in new_id:
            new_id[root] = len(new_id) + 1
        label[v] = new_id[root]
    return quotient(g, label, len(new_id)), label


def build_grid(r: int, q: int) -> Graph:
    """The r x q grid; cell (i, j) is vertex (i - 1) * q + j."""
    if r < 1 or q < 1:
        raise GraphError("grid dimensions must be positive")
    edges = []
    for i in range(1, r + 1):
        for j in range(1, q + 1):
            v = (i - 1) * q + j
            if j < q:
                edges.append((v, v + 1))
            if i < r:
                edges.append((v, v + q))
    return from_edge_list(r * q, edges)


def grid_vertex(q: int, i: int, j: int) -> int:
    return (i - 1) * q + j


@dataclass(frozen=True)
class WitnessMap:
    """Onto map from the vertices of G to the cells of an r x q grid."""

    rows: int
    cols: int
    assign: Mapping[int, Cell] = field(hash=False)

    def cells(self) -> dict[Cell, int]:
        """Cell -> bitmask of its witness set."""
        out: dict[Cell, int] = {}
        for v, c in self.assign.items():
            out[c] = out.get(c, 0) | (1 << v)
        return out

    def cost(self, n: int) -> int:
        return n - self.rows * self.cols

    def transposed(self) -> "WitnessMap":
        return WitnessMap(self.cols, self.rows, {v: (j, i) for v, (i, j) in self.assign.items()})


class Corners(NamedTuple):
    x1: int
    x2: int
    x3: int
    x4: int

    @classmethod
    def of(cls, x1: int, x2: int, x3: int, x4: int) -> "Corners":
        if len({x1, x2, x3, x4}) != 4:
            raise GraphError("corner vertices must be pairwise distinct")
        return cls(x1, x2, x3, x4)


def _path_coords(g: Graph) -> list[dict[int, Cell]]:
    ends = [v for v in g.vertices() if g.degree(v) == 1]
    out = []
    for start in ends:
        coords = {start: (1, 1)}
        prev, cur = 0, start
        while True:
            nxt = [w for w in iter_bits(g.nbr(cur)) if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            coords[cur] = (1, len(coords) + 1)
        out.append(coords)
    return out


def _grid_coords(g: Graph, r: int, q: int) -> list[dict[int, Cell]]:
    corners = [v for v in g.vertices() if g.degree(v) == 2]
    if len(corners) != 4:
        return []
    dists = {c: bfs_distances(g, c) for c in corners}
    out = []
    for c in corners:
        for t in corners:
            if t == c or dists[c][t] != q - 1:
                continue
            coords: dict[int, Cell] = {}
            seen: set[Cell] = set()
            ok = True
            for v in g.vertices():
                d1, d2 = dists[c][v], dists[t][v]
                twice_j = d1 - d2 + q + 1
                if twice_j % 2:
                    ok = False
                    break
                j = twice_j // 2
                i = d1 - j + 2
                if not (1 <= i <= r and 1 <= j <= q) or (i, j) in seen:
                    ok = False
                    break
                seen.add((i, j))
                coords[v] = (i, j)
            if not ok:
                continue
            if all(abs(coords[u][0] - coords[v][0]) + abs(coords[u][1] - coords[v][1]) == 1
                   for u, v in g.edges()):
                out.append(coords)
    return out


def recognize_grid(g: Graph) -> Optional[WitnessMap]:
    """Grid coordinates of ``g`` (rows <= cols), or None when ``g`` is not a grid.

    Among the symmetric labelings the lexicographically smallest
    (by the coordinates of vertex 1, then 2, ...) is returned.
    """
    n, m = g.n, g.m
    if n == 0 or not g.is_connected():
        return None
    if n == 1:
        return WitnessMap(1, 1, {1: (1, 1)})
    if m == n - 1 and all(g.degree(v) <= 2 for v in g.vertices()):
        cands, r, q = _path_coords(g), 1, n
    else:
        cands = []
        r = q = 0
        for rr in range(2, n + 1):
            if rr * rr > n:
                break
            if n % rr:
                continue
            qq = n // rr
            if 2 * rr * qq - rr - qq == m:
                cands = _grid_coords(g, rr, qq)
                r, q = rr, qq
                break
    if not cands:
        return None
    best = min(cands, key=lambda c: tuple(c[v] for v in range(1, n + 1)))
    return WitnessMap(r, q, best)


def unique_shortest_path(g: Graph, u: int, v: int) -> Optional[tuple[int, ...]]:
    """The u-v shortest path if it is the only one, else None."""
    dist = [-1] * (g.n + 1)
    count = [0] * (g.n + 1)
    pred = [0] * (g.n + 1)
    dist[u], count[u] = 0, 1
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in iter_bits(g.nbr(x)):
            if dist[w] < 0:
                dist[w] = dist[x] + 1
                queue.append(w)
            if dist[w] == dist[x] + 1:
                count[w] = min(2, count[w] + count[x])
                pred[w] = x
    if dist[v] < 0 or count[v] != 1:
        return None
    path = [v]
    while path[-1] != u:
        path.append(pred[path[-1]])
    return tuple(reversed(path))


def shortest_path_counts(g: Graph, u: int) -> tuple[list[int], list[int]]:
    """BFS distances from ``u`` and path counts capped at 2."""
    dist = [-1] * (g.n + 1)
    count = [0] * (g.n + 1)
    dist[u], count[u] = 0, 1
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in iter_bits(g.nbr(x)):
            if dist[w] < 0:
                dist[w] = dist[x] + 1
                queue.append(w)
            if dist[w] == dist[x] + 1:
                count[w] = min(2, count[w] + count[x])
    return dist, count


def first_vertex(mask: int) -> int:
    return lowest(mask)
