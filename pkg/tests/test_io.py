import pytest
from hypothesis import given, settings, strategies as st

from gridctl import io as gio
from gridctl.graph import WitnessMap, build_grid, from_edge_list
from gridctl.instances import CnfFormula, Hypergraph, NaeFormula


@st.composite
def graphs(draw):
    n = draw(st.integers(0, 9))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return from_edge_list(n, chosen)


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_graph_round_trip(g):
    assert gio.read_graph(gio.write_graph(g, ["note"])) == g


@pytest.mark.parametrize("text,fragment", [
    ("e 1 2\n", "before header"),
    ("p graph 2 1\ne 1 1\n", "self-loop"),
    ("p graph 2 2\ne 1 2\ne 2 1\n", "duplicate"),
    ("p graph 2 1\ne 1 3\n", "outside"),
    ("p graph 2 2\ne 1 2\n", "announces"),
    ("p graph 2 1\nx 1 2\n", "unknown"),
    ("c only comments\n", "missing"),
    ("p graph 2 1\ne 1 b\n", "integers"),
])
def test_graph_errors(text, fragment):
    with pytest.raises(gio.ParseError) as exc:
        gio.read_graph(text)
    assert fragment in str(exc.value)


def test_error_carries_line_number():
    with pytest.raises(gio.ParseError) as exc:
        gio.read_graph("c x\np graph 3 2\ne 1 2\ne 2 2\n")
    assert exc.value.line == 4


def test_certificate_round_trip():
    w = WitnessMap(2, 2, {1: (1, 1), 2: (1, 2), 3: (2, 2), 4: (2, 1), 5: (2, 1)})
    text = gio.write_certificate("YES", w, 5, ["from test"])
    cert = gio.read_certificate(text)
    assert cert.verdict == "YES" and cert.cost == 1
    assert dict(cert.witness.assign) == dict(w.assign)
    assert not cert.reduced_form
    assert gio.read_certificate(gio.write_certificate("NO")).verdict == "NO"


def test_reduced_form_marker():
    text = gio.write_certificate("YES", WitnessMap(1, 1, {1: (1, 1)}), 1, ["reduced-form certificate"])
    assert gio.read_certificate(text).reduced_form


@pytest.mark.parametrize("text", [
    "w 1 1 1\n",
    "s YES 1 1\n",
    "s MAYBE\n",
    "s NO\ns NO\n",
    "s YES 1 1 0\nw 1 1 1\nw 1 1 1\n",
    "c nothing\n",
])
def test_certificate_errors(text):
    with pytest.raises(gio.ParseError):
        gio.read_certificate(text)


def test_formula_round_trip():
    cnf = CnfFormula(3, ((1, -2), (3,), (-1, 2, -3)))
    assert gio.read_formula(gio.write_formula(cnf)) == cnf
    nae = NaeFormula(2, ((1, 2), (-1, -2)))
    back = gio.read_formula(gio.write_formula(nae))
    assert isinstance(back, NaeFormula) and back == nae


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 1\n1 2\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\n0\n",
    "p dnf 2 1\n1 0\n",
])
def test_formula_errors(text):
    with pytest.raises(gio.ParseError):
        gio.read_formula(text)


def test_hypergraph_round_trip():
    h = Hypergraph(4, ((1, 2), (3, 4), (1, 2, 3)))
    assert gio.read_hypergraph(gio.write_hypergraph(h)) == h


@pytest.mark.parametrize("text", [
    "h 2 1 2\n",
    "p hyp 2 1\nh 3 1 2\n",
    "p hyp 2 1\nh 2 1 5\n",
    "p hyp 2 2\nh 2 1 2\n",
    "p hyp 2 1\nq 2 1 2\n",
])
def test_hypergraph_errors(text):
    with pytest.raises(gio.ParseError):
        gio.read_hypergraph(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(gio.ParseError):
        gio.load(tmp_path / "absent.graph", gio.read_graph)


def test_load_and_comments(tmp_path):
    p = tmp_path / "g.graph"
    p.write_text(gio.write_graph(build_grid(2, 2), ["k 3", "expected YES"]))
    assert gio.load(p, gio.read_graph) == build_grid(2, 2)
    assert gio.comments_of(p.read_text()) == ["k 3", "expected YES"]
