"""Text formats: graphs, certificates, CNF/NAE formulas and hypergraphs.

Every format uses ``c`` comment lines and a ``p`` header line; readers report
the offending line number on malformed input.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

from .graph import Graph, GraphError, WitnessMap, from_edge_list
from .instances import CnfFormula, Hypergraph, NaeFormula

__all__ = [
    "ParseError",
    "Certificate",
    "read_graph",
    "write_graph",
    "read_certificate",
    "write_certificate",
    "read_formula",
    "write_formula",
    "read_hypergraph",
    "write_hypergraph",
    "load",
]

NAE_TAG = "semantics nae"


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s:
            continue
        yield no, s.split()


def _ints(no: int, toks: list[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError(no, f"expected integers, got {' '.join(toks)!r}") from None


def comments_of(text: str) -> list[str]:
    out = []
    for _, toks in _lines(text):
        if toks[0] == "c":
            out.append(" ".join(toks[1:]))
    return out


# ---------------------------------------------------------------- graphs

def read_graph(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for no, toks in _lines(text):
        tag = toks[0]
        if tag == "c":
            continue
        if tag == "p":
            if n is not None:
                raise ParseError(no, "second header line")
            if len(toks) != 4 or toks[1] != "graph":
                raise ParseError(no, "header must read 'p graph <n> <m>'")
            n, m = _ints(no, toks[2:])
            if n < 0 or m < 0:
                raise ParseError(no, "negative counts in header")
            continue
        if tag == "e":
            if n is None:
                raise ParseError(no, "edge before header")
            if len(toks) != 3:
                raise ParseError(no, "edge line must read 'e <u> <v>'")
            u, v = _ints(no, toks[1:])
            if u == v:
                raise ParseError(no, f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(no, f"vertex outside 1..{n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(no, f"duplicate edge {key[0]} {key[1]}")
            seen.add(key)
            edges.append(key)
            continue
        raise ParseError(no, f"unknown line type {tag!r}")
    if n is None:
        raise ParseError(0, "missing 'p graph' header")
    if len(edges) != m:
        raise ParseError(0, f"header announces {m} edges, found {len(edges)}")
    return from_edge_list(n, edges)


def write_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p graph {g.n} {g.m}")
    out += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- certificates

class Certificate:
    def __init__(self, verdict: str, witness: Optional[WitnessMap] = None,
                 cost: Optional[int] = None, comments: Iterable[str] = ()):
        self.verdict = verdict
        self.witness = witness
        self.cost = cost
        self.comments = list(comments)

    @property
    def reduced_form(self) -> bool:
        return any(c.startswith("reduced-form") for c in self.comments)


def write_certificate(verdict: str, w: Optional[WitnessMap] = None, n: Optional[int] = None,
                      comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    if verdict != "YES" or w is None:
        out.append("s NO")
        return "\n".join(out) + "\n"
    count = n if n is not None else len(w.assign)
    out.append(f"s YES {w.rows} {w.cols} {count - w.rows * w.cols}")
    out += [f"w {v} {i} {j}" for v, (i, j) in sorted(w.assign.items())]
    return "\n".join(out) + "\n"


def read_certificate(text: str) -> Certificate:
    verdict = None
    rows = cols = cost = None
    assign: dict[int, tuple[int, int]] = {}
    comments = []
    for no, toks in _lines(text):
        tag = toks[0]
        if tag == "c":
            comments.append(" ".join(toks[1:]))
        elif tag == "s":
            if verdict is not None:
                raise ParseError(no, "second verdict line")
            if toks[1:] == ["NO"]:
                verdict = "NO"
            elif len(toks) == 5 and toks[1] == "YES":
                verdict = "YES"
                rows, cols, cost = _ints(no, toks[2:])
            else:
                raise ParseError(no, "verdict must read 's NO' or 's YES <r> <q> <cost>'")
        elif tag == "w":
            if verdict != "YES":
                raise ParseError(no, "witness line without a YES verdict")
            if len(toks) != 4:
                raise ParseError(no, "witness line must read 'w <v> <row> <col>'")
            v, i, j = _ints(no, toks[1:])
            if v in assign:
                raise ParseError(no, f"vertex {v} assigned twice")
            assign[v] = (i, j)
        else:
            raise ParseError(no, f"unknown line type {tag!r}")
    if verdict is None:
        raise ParseError(0, "missing verdict line")
    if verdict == "NO":
        return Certificate("NO", None, None, comments)
    return Certificate("YES", WitnessMap(rows, cols, assign), cost, comments)


# ---------------------------------------------------------------- formulas

def read_formula(text: str) -> Union[CnfFormula, NaeFormula]:
    """DIMACS CNF; a ``c semantics nae`` comment marks an NAE formula."""
    nvars = ncl = None
    nae = False
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for no, toks in _lines(text):
        if toks[0] == "c":
            nae = nae or " ".join(toks[1:]) == NAE_TAG
            continue
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError(no, "header must read 'p cnf <vars> <clauses>'")
            nvars, ncl = _ints(no, toks[2:])
            continue
        if nvars is None:
            raise ParseError(no, "clause before header")
        for lit in _ints(no, toks):
            if lit == 0:
                if not pending:
                    raise ParseError(no, "empty clause")
                clauses.append(tuple(pending))
                pending = []
            elif abs(lit) > nvars:
                raise ParseError(no, f"literal {lit} exceeds {nvars} variables")
            else:
                pending.append(lit)
    if nvars is None:
        raise ParseError(0, "missing 'p cnf' header")
    if pending:
        raise ParseError(0, "last clause is not terminated by 0")
    if len(clauses) != ncl:
        raise ParseError(0, f"header announces {ncl} clauses, found {len(clauses)}")
    cls = NaeFormula if nae else CnfFormula
    return cls(nvars, tuple(clauses))


def write_formula(f: Union[CnfFormula, NaeFormula], comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    if isinstance(f, NaeFormula):
        out.append(f"c {NAE_TAG}")
    out.append(f"p cnf {f.variable_count} {len(f.clauses)}")
    out += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- hypergraphs

def read_hypergraph(text: str) -> Hypergraph:
    n = m = None
    edges = []
    for no, toks in _lines(text):
        if toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "hyp":
                raise ParseError(no, "header must read 'p hyp <n> <m>'")
            n, m = _ints(no, toks[2:])
            continue
        if toks[0] != "h":
            raise ParseError(no, f"unknown line type {toks[0]!r}")
        if n is None:
            raise ParseError(no, "hyperedge before header")
        vals = _ints(no, toks[1:])
        if not vals or vals[0] != len(vals) - 1 or vals[0] == 0:
            raise ParseError(no, "hyperedge line must read 'h <size> <v1> ... <vsize>'")
        if any(not 1 <= v <= n for v in vals[1:]):
            raise ParseError(no, f"vertex outside 1..{n}")
        edges.append(tuple(vals[1:]))
    if n is None:
        raise ParseError(0, "missing 'p hyp' header")
    if len(edges) != m:
        raise ParseError(0, f"header announces {m} hyperedges, found {len(edges)}")
    return Hypergraph(n, tuple(edges))


def write_hypergraph(h: Hypergraph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p hyp {h.vertex_count} {len(h.edges)}")
    out += [f"h {len(e)} " + " ".join(map(str, e)) for e in h.edges]
    return "\n".join(out) + "\n"


def load(path: Union[str, Path], reader):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(0, f"cannot read {path}: {exc.strerror}") from None
    try:
        return reader(text)
    except (GraphError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(0, str(exc)) from None
