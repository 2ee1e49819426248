import csv
import subprocess
import sys

import pytest

from gridctl import io as gio
from gridctl.cli import BENCH_FIELDS, main
from gridctl.graph import build_grid
from gridctl.instances import nae_family

from support import cycle, star


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def verdict_line(out):
    return next(line for line in out.splitlines() if not line.startswith("c "))


@pytest.fixture
def c4_file(tmp_path):
    p = tmp_path / "c4.graph"
    p.write_text(gio.write_graph(cycle(4)))
    return p


def test_solve_c4(capsys, c4_file):
    code, out, _ = run(capsys, "solve", "--input", c4_file, "-k", 0)
    assert code == 0 and verdict_line(out) == "s YES"


def test_solve_path_mode_claw(capsys, tmp_path):
    p = tmp_path / "claw.graph"
    p.write_text(gio.write_graph(star(3)))
    code, out, _ = run(capsys, "solve", "--input", p, "-k", 0, "--mode", "path")
    assert code == 0 and verdict_line(out) == "s NO"


def test_annotated_certificate_verifies(capsys, c4_file, tmp_path):
    cert = tmp_path / "c4.cert"
    code, out, _ = run(capsys, "solve", "--input", c4_file, "-k", 0,
                       "--mode", "annotated:2,2,1,2,3,4", "--certificate", cert)
    assert code == 0 and verdict_line(out) == "s YES"
    code, out, _ = run(capsys, "verify", "--input", c4_file, "--certificate", cert, "-k", 0)
    assert code == 0 and out.strip() == "accept"


def test_tampered_certificate_rejected(capsys, tmp_path):
    g = tmp_path / "g.graph"
    g.write_text(gio.write_graph(build_grid(2, 3)))
    cert = tmp_path / "g.cert"
    run(capsys, "solve", "--input", g, "-k", 0, "--certificate", cert)
    lines = cert.read_text().splitlines()
    i = next(i for i, line in enumerate(lines) if line.startswith("w "))
    _, v, r, c = lines[i].split()
    lines[i] = f"w {v} {3 - int(r)} {c}"
    cert.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", "--input", g, "--certificate", cert, "-k", 0)
    assert code == 0 and out.startswith("reject ")
    assert out.split()[1].rstrip(":") in {"not-onto", "disconnected-cell", "extra-adjacency", "missing-adjacency"}


def test_oracle_check_agrees(capsys, tmp_path):
    p = tmp_path / "g.graph"
    p.write_text(gio.write_graph(build_grid(2, 3)))
    code, out, _ = run(capsys, "solve", "--input", p, "-k", 1, "--oracle-check")
    assert code == 0 and "c oracle YES" in out


def test_oracle_budget_exit(capsys, tmp_path, monkeypatch):
    p = tmp_path / "g.graph"
    p.write_text(gio.write_graph(build_grid(3, 3)))
    monkeypatch.setenv("GRIDCTL_BUDGET", "2")
    code, out, _ = run(capsys, "oracle", "--input", p, "-k", 3, "--rows", 2)
    assert code == 3 and verdict_line(out) == "s BUDGET"


def test_oracle_disagreement_exit(capsys, c4_file, monkeypatch):
    import gridctl.cli as cli

    class Fake:
        answer, yes, explored = "NO", False, 0

    monkeypatch.setattr(cli, "brute_force_grid", lambda *a, **kw: Fake())
    code, _, err = run(capsys, "solve", "--input", c4_file, "-k", 0, "--oracle-check")
    assert code == 4 and "disagrees" in err


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.graph"
    p.write_text("p graph 2 1\ne 1 1\n")
    code, _, err = run(capsys, "solve", "--input", p, "-k", 0)
    assert code == 2 and "self-loop" in err


def test_missing_file_and_bad_mode(capsys, c4_file, tmp_path):
    assert run(capsys, "solve", "--input", tmp_path / "nope", "-k", 0)[0] == 2
    assert run(capsys, "solve", "--input", c4_file, "-k", 0, "--mode", "bounded:x")[0] == 2
    assert run(capsys, "solve", "--input", c4_file)[0] == 2


def test_bounded_mode(capsys, c4_file):
    # one contraction only reaches a triangle, two reach an edge
    code, out, _ = run(capsys, "solve", "--input", c4_file, "-k", 1, "--mode", "bounded:1")
    assert code == 0 and verdict_line(out) == "s NO"
    code, out, _ = run(capsys, "solve", "--input", c4_file, "-k", 2, "--mode", "bounded:1")
    assert code == 0 and verdict_line(out) == "s YES"


def test_kernelize_small_graph_echoed(capsys, c4_file):
    code, out, _ = run(capsys, "kernelize", "--input", c4_file, "-k", 1)
    assert code == 0
    assert verdict_line(out) == "kernel n=4 m=4 bound=627"
    body = out.split("\n", 1)[1]
    assert gio.read_graph(body) == cycle(4)
    assert "c kernel k=1 rr3=0" in body


def test_kernelize_star_no(capsys, tmp_path):
    p = tmp_path / "s.graph"
    p.write_text(gio.write_graph(star(8)))
    code, out, _ = run(capsys, "kernelize", "--input", p, "-k", 1)
    assert code == 0 and verdict_line(out) == "s NO"


def test_kernelize_to_file(capsys, c4_file, tmp_path):
    out_file = tmp_path / "k.graph"
    run(capsys, "kernelize", "--input", c4_file, "-k", 0, "--output", out_file)
    assert gio.load(out_file, gio.read_graph) == cycle(4)


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    for p in (a, b):
        assert run(capsys, "gen", "grid-split", "--rows", 2, "--cols", 3, "-k", 2, "--seed", 7, "--output", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert gio.load(a, gio.read_graph).n == 8


def test_gen_witness_verifies(capsys, tmp_path):
    g, w = tmp_path / "g.graph", tmp_path / "w.cert"
    run(capsys, "gen", "grid-split", "--rows", 3, "--cols", 3, "-k", 2, "--seed", 1, "--output", g, "--witness", w)
    code, out, _ = run(capsys, "verify", "--input", g, "--certificate", w, "-k", 2)
    assert out.strip() == "accept"


def test_gen_reduction_chain(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    nae, hyp, graph = tmp_path / "f.nae", tmp_path / "f.hyp", tmp_path / "f.graph"
    assert run(capsys, "gen", "nae", "--input", cnf, "--output", nae)[0] == 0
    assert run(capsys, "gen", "hypergraph", "--input", nae, "--output", hyp)[0] == 0
    assert run(capsys, "gen", "c4", "--input", hyp, "--output", graph)[0] == 0
    h = gio.load(hyp, gio.read_hypergraph)
    g = gio.load(graph, gio.read_graph)
    assert h.vertex_count == 6
    assert g.n == 6 + 2 * (len(h.edges) + 1) + 2
    # the NAE step refuses an NAE input
    assert run(capsys, "gen", "nae", "--input", nae)[0] == 2


def test_gen_random(capsys):
    code, out, _ = run(capsys, "gen", "random", "--n", 5, "--m", 6, "--seed", 3, "--connected")
    g = gio.read_graph(out)
    assert code == 0 and (g.n, g.m) == (5, 6) and g.is_connected()


def test_bench_nae_corpus_matches_expected(capsys, tmp_path):
    corpus = tmp_path / "corpus"
    run(capsys, "gen", "nae-corpus", "--max-vars", 2, "--max-clauses", 2, "--output", corpus)
    files = sorted(corpus.glob("*.graph"))
    assert len(files) == len(nae_family(2, 2))
    table = tmp_path / "bench.csv"
    code = run(capsys, "bench", "--dir", corpus, "--output", table, "--command", "oracle",
               "--method", "partition", "--min-side", 2, "--jobs", 2)[0]
    assert code == 0
    with table.open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0].keys()) == BENCH_FIELDS
    expected = {p.stem: next(c.split()[1] for c in gio.comments_of(p.read_text()) if c.startswith("expected"))
                for p in files}
    assert {r["id"]: r["verdict"] for r in rows} == expected
    assert all(r["outcome"] == "ok" and float(r["wall_time"]) >= 0 for r in rows)


def test_bench_restartable_and_timeout(capsys, tmp_path):
    corpus = tmp_path / "c"
    corpus.mkdir()
    for i, r in enumerate((2, 2, 3)):
        (corpus / f"g{i}.graph").write_text(gio.write_graph(build_grid(r, 3), ["k 0"]))
    table = tmp_path / "t.csv"
    table.write_text(",".join(BENCH_FIELDS) + "\ng0,6,7,0,solve,YES,0,0.1,1,1,1,ok\n")
    run(capsys, "bench", "--dir", corpus, "--output", table, "--timeout", 30)
    with table.open() as fh:
        rows = list(csv.DictReader(fh))
    assert [r["id"] for r in rows] == ["g0", "g1", "g2"]
    assert rows[0]["wall_time"] == "0.1"
    assert all(r["verdict"] == "YES" for r in rows)
    before = table.read_text()
    run(capsys, "bench", "--dir", corpus, "--output", table)
    assert table.read_text() == before


def test_bench_timeout_recorded(capsys, tmp_path):
    corpus = tmp_path / "c"
    corpus.mkdir()
    (corpus / "slow.graph").write_text(gio.write_graph(build_grid(5, 5), ["k 4"]))
    table = tmp_path / "t.csv"
    run(capsys, "bench", "--dir", corpus, "--output", table, "--timeout", 0.5)
    with table.open() as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["outcome"] == "timeout" and rows[0]["n"] == "25"


def test_console_entry_point(c4_file):
    proc = subprocess.run([sys.executable, "-m", "gridctl.cli", "solve", "--input", str(c4_file), "-k", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("s YES")
