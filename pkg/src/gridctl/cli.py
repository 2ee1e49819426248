"""``gridctl`` command line: solve, kernelize, gen, verify, oracle and bench.

Verdicts go to stdout as ``s YES`` / ``s NO`` lines. Exit codes: 0 for any
verdict, 2 for unreadable input, 3 for an exhausted budget or timeout, 4 when
``--oracle-check`` disagrees with the solver.
"""

from __future__ import annotations

import argparse
import csv
import multiprocessing as mp
import os
import signal
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from . import io as gio
from .bounded import solve_annotated, solve_bounded, solve_path
from .graph import Corners, Graph, GraphError
from .grid import solve
from .instances import (
    CnfFormula,
    NaeFormula,
    hypergraph_to_c4_instance,
    nae_family,
    nae_to_hypergraph,
    random_graph,
    sat3_to_nae,
    split_grid,
)
from .kernel import kernelize
from .oracle import brute_force_grid, brute_force_nae, verify_witness

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_DISAGREE = 0, 2, 3, 4

BENCH_FIELDS = ["id", "n", "m", "k", "command", "verdict", "cost", "wall_time",
                "table_entries", "extenders", "peak_candidates", "outcome"]


class Timeout(Exception):
    pass


@contextmanager
def _time_limit(seconds: Optional[float]):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise Timeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _err(msg: str) -> None:
    print(f"gridctl: {msg}", file=sys.stderr)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------- solve

def _parse_mode(mode: str):
    if mode in ("grid", "path"):
        return mode, ()
    name, _, rest = mode.partition(":")
    try:
        vals = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mode {mode!r}") from None
    if name == "bounded" and len(vals) == 1:
        return name, vals
    if name == "annotated" and len(vals) == 6:
        return name, vals
    raise argparse.ArgumentTypeError(f"bad mode {mode!r}")


def _run_solver(g: Graph, k: int, mode: str, args: tuple, branching: bool):
    if mode == "grid":
        return solve(g, k, branching=branching)
    if mode == "path":
        return solve_path(g, k)
    if mode == "bounded":
        return solve_bounded(g, k, args[0])
    r, q, x1, x2, x3, x4 = args
    return solve_annotated(g, k, r, q, Corners.of(x1, x2, x3, x4))


def _oracle_for(g: Graph, k: int, mode: str, args: tuple):
    if mode == "grid":
        return brute_force_grid(g, k)
    if mode == "path":
        return brute_force_grid(g, k, rows=1)
    if mode == "bounded":
        return brute_force_grid(g, k, rows=args[0])
    r, q, x1, x2, x3, x4 = args
    return brute_force_grid(g, k, rows=r, cols=q, corners=Corners(x1, x2, x3, x4))


def cmd_solve(a) -> int:
    g = gio.load(a.input, gio.read_graph)
    mode, margs = _parse_mode(a.mode)
    try:
        with _time_limit(a.timeout):
            res = _run_solver(g, a.k, mode, margs, a.branching_separator)
    except Timeout:
        print("s TIMEOUT")
        return EXIT_BUDGET
    except GraphError as exc:
        _err(str(exc))
        return EXIT_PARSE
    print(f"s {res.verdict}")
    w = res.certificate
    if res.yes and w is not None:
        n = res.reduced_graph.n if res.reduced_graph is not None else g.n
        print(f"c rows={w.rows} cols={w.cols} cost={n - w.rows * w.cols}")
        if res.reduced_graph is not None:
            print("c reduced-form certificate")
    s = res.stats
    print(f"c table_entries={s.table_entries} extenders={s.extenders} time={s.elapsed:.3f}")
    if a.certificate:
        comments = []
        if res.reduced_graph is not None:
            comments.append("reduced-form certificate for the graph after row-pair contractions")
            comments += [f"map {v} {x}" for v, x in sorted(res.reduction_map.items())]
        n = res.reduced_graph.n if res.reduced_graph is not None else g.n
        Path(a.certificate).write_text(gio.write_certificate(res.verdict, w, n, comments))
    if a.oracle_check:
        ref = _oracle_for(g, a.k, mode, margs)
        if ref.answer == "BUDGET":
            _err("oracle budget exhausted; set GRIDCTL_BUDGET to raise it")
            return EXIT_BUDGET
        if ref.yes != res.yes:
            _err(f"oracle disagrees: solver {res.verdict}, oracle {ref.answer}")
            return EXIT_DISAGREE
        print(f"c oracle {ref.answer} explored={ref.explored}")
    return EXIT_OK


# ---------------------------------------------------------------- kernelize

def cmd_kernelize(a) -> int:
    g = gio.load(a.input, gio.read_graph)
    rep = kernelize(g, a.k)
    if rep.outcome != "kernel":
        print("s NO")
        print(f"c reason: {rep.reason}")
        print(f"c bound={rep.bound}")
        return EXIT_OK
    h = rep.kernel_graph
    print(f"kernel n={h.n} m={h.m} bound={rep.bound}")
    text = gio.write_graph(h, [f"kernel k={a.k} rr3={rep.rr3_applications}"])
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- gen

def cmd_gen(a) -> int:
    kind = a.kind
    if kind == "grid-split":
        g, k, w = split_grid(a.rows, a.cols, a.k, a.seed)
        text = gio.write_graph(g, [f"k {k}", "expected YES",
                                   f"planted rows={a.rows} cols={a.cols} seed={a.seed}"])
        _write(a.output, text)
        if a.witness:
            Path(a.witness).write_text(gio.write_certificate("YES", w, g.n))
        return EXIT_OK
    if kind == "random":
        g = random_graph(a.n, a.m, a.seed, connected=a.connected)
        _write(a.output, gio.write_graph(g, [f"random n={a.n} m={a.m} seed={a.seed}"]))
        return EXIT_OK
    if kind == "nae":
        f = gio.load(a.input, gio.read_formula)
        if isinstance(f, NaeFormula):
            _err("input is already an NAE formula")
            return EXIT_PARSE
        _write(a.output, gio.write_formula(sat3_to_nae(f)))
        return EXIT_OK
    if kind == "hypergraph":
        f = gio.load(a.input, gio.read_formula)
        if isinstance(f, CnfFormula):
            f = NaeFormula(f.variable_count, f.clauses)
        _write(a.output, gio.write_hypergraph(nae_to_hypergraph(f)))
        return EXIT_OK
    if kind == "c4":
        h = gio.load(a.input, gio.read_hypergraph)
        inst = hypergraph_to_c4_instance(h)
        notes = [f"k {inst.k}"]
        if inst.added_universal:
            notes.append("universal hyperedge added")
        if inst.duplicated_universal:
            notes.append("universal hyperedge duplicated")
        _write(a.output, gio.write_graph(inst.graph, notes))
        return EXIT_OK
    if kind == "nae-corpus":
        out = Path(a.output or "nae-corpus")
        out.mkdir(parents=True, exist_ok=True)
        for idx, f in enumerate(nae_family(a.max_vars, a.max_clauses)):
            inst = hypergraph_to_c4_instance(nae_to_hypergraph(f))
            expected = "YES" if brute_force_nae(f) else "NO"
            name = f"nae{idx:04d}"
            (out / f"{name}.cnf").write_text(gio.write_formula(f))
            (out / f"{name}.graph").write_text(gio.write_graph(inst.graph, [f"k {inst.k}", f"expected {expected}"]))
        return EXIT_OK
    _err(f"unknown generator {kind!r}")
    return EXIT_PARSE


# ---------------------------------------------------------------- verify / oracle

def cmd_verify(a) -> int:
    g = gio.load(a.input, gio.read_graph)
    cert = gio.load(a.certificate, gio.read_certificate)
    if cert.verdict != "YES":
        print("reject no-verdict: certificate carries no witness")
        return EXIT_OK
    if cert.reduced_form:
        print("reject reduced-form: witness refers to a reduced graph")
        return EXIT_OK
    chk = verify_witness(g, cert.witness, a.k)
    if chk.ok and cert.cost is not None and cert.cost != g.n - cert.witness.rows * cert.witness.cols:
        print("reject cost-mismatch: declared cost differs from n - r*q")
        return EXIT_OK
    print("accept" if chk.ok else f"reject {chk.reason}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    g = gio.load(a.input, gio.read_graph)
    v = brute_force_grid(g, a.k, rows=a.rows, min_side=a.min_side, method=a.method)
    if v.answer == "BUDGET":
        print("s BUDGET")
        return EXIT_BUDGET
    print(f"s {v.answer}")
    print(f"c explored={v.explored}")
    return EXIT_OK


# ---------------------------------------------------------------- bench

def _instance_k(path: Path, default: Optional[int]) -> Optional[int]:
    for c in gio.comments_of(path.read_text()):
        parts = c.split()
        if len(parts) == 2 and parts[0] == "k":
            return int(parts[1])
    return default


def _bench_one(path: str, k: int, command: str, oracle_opts: dict, conn) -> None:
    rec = {"verdict": "", "cost": "", "table_entries": 0, "extenders": 0, "peak_candidates": 0}
    try:
        g = gio.load(path, gio.read_graph)
        start = time.perf_counter()
        if command == "kernelize":
            rep = kernelize(g, k)
            rec["verdict"] = "NO" if rep.outcome != "kernel" else "KERNEL"
        elif command == "oracle":
            v = brute_force_grid(g, k, **oracle_opts)
            rec["verdict"] = v.answer
            if v.yes and v.witness is not None:
                rec["cost"] = g.n - v.witness.rows * v.witness.cols
            if v.answer == "BUDGET":
                rec["outcome"] = "budget"
        else:
            res = solve_path(g, k) if command == "path" else solve(g, k)
            rec["verdict"] = res.verdict
            if res.yes and res.certificate is not None:
                rec["cost"] = g.n - res.certificate.rows * res.certificate.cols
            rec["table_entries"] = res.stats.table_entries
            rec["extenders"] = res.stats.extenders
            rec["peak_candidates"] = res.stats.peak_candidates
        rec["wall_time"] = f"{time.perf_counter() - start:.4f}"
        rec.setdefault("outcome", "ok")
    except Exception as exc:  # reported in the table, never silently dropped
        rec["outcome"] = f"error:{type(exc).__name__}"
    conn.send(rec)
    conn.close()


def cmd_bench(a) -> int:
    src = Path(a.dir)
    files = sorted(p for p in src.iterdir() if p.suffix in (".graph", ".gr"))
    out = Path(a.output)
    done = set()
    if out.exists():
        with out.open() as fh:
            done = {row["id"] for row in csv.DictReader(fh)}
    new_file = not out.exists() or out.stat().st_size == 0
    todo = [p for p in files if p.stem not in done]
    opts = {"min_side": a.min_side, "method": a.method}
    ctx = mp.get_context("fork" if hasattr(os, "fork") else "spawn")
    with out.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        if new_file:
            writer.writeheader()
        running: list = []
        queue = list(todo)
        while queue or running:
            while queue and len(running) < max(1, a.jobs):
                p = queue.pop(0)
                k = _instance_k(p, a.k)
                if k is None:
                    _err(f"{p.name}: no 'c k <int>' line and no -k given")
                    return EXIT_PARSE
                recv, send = ctx.Pipe(duplex=False)
                proc = ctx.Process(target=_bench_one, args=(str(p), k, a.command, opts, send))
                proc.start()
                send.close()
                running.append((p, k, proc, recv, time.perf_counter()))
            still = []
            for p, k, proc, recv, t0 in running:
                rec = None
                if recv.poll():
                    try:
                        rec = recv.recv()
                    except EOFError:
                        rec = {"outcome": "error:crash"}
                    proc.join()
                elif not proc.is_alive():
                    proc.join()
                    rec = {"outcome": "error:crash"}
                elif a.timeout and time.perf_counter() - t0 > a.timeout:
                    proc.terminate()
                    proc.join()
                    rec = {"outcome": "timeout", "wall_time": f"{a.timeout:.4f}"}
                if rec is None:
                    still.append((p, k, proc, recv, t0))
                    continue
                row = {f: "" for f in BENCH_FIELDS}
                g = gio.load(p, gio.read_graph)
                row.update({"id": p.stem, "n": g.n, "m": g.m, "k": k, "command": a.command})
                row.update({f: v for f, v in rec.items() if f in row})
                writer.writerow(row)
                fh.flush()
            running = still
            if running:
                time.sleep(0.01)
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gridctl", description="Grid contraction solver toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="decide k-contractibility to a grid")
    s.add_argument("--input", required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--certificate")
    s.add_argument("--oracle-check", action="store_true")
    s.add_argument("--mode", default="grid")
    s.add_argument("--branching-separator", action="store_true")
    s.add_argument("--timeout", type=float)
    s.set_defaults(func=cmd_solve)

    kz = sub.add_parser("kernelize", help="reduce to a kernel or report NO")
    kz.add_argument("--input", required=True)
    kz.add_argument("-k", type=int, required=True)
    kz.add_argument("--output")
    kz.set_defaults(func=cmd_kernelize)

    g = sub.add_parser("gen", help="generate instances")
    g.add_argument("kind", choices=["grid-split", "random", "nae", "hypergraph", "c4", "nae-corpus"])
    g.add_argument("--rows", type=int, default=2)
    g.add_argument("--cols", type=int, default=2)
    g.add_argument("-k", type=int, default=0)
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--connected", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--input")
    g.add_argument("--output")
    g.add_argument("--witness")
    g.add_argument("--max-vars", type=int, default=3)
    g.add_argument("--max-clauses", type=int, default=3)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a certificate against a graph")
    v.add_argument("--input", required=True)
    v.add_argument("--certificate", required=True)
    v.add_argument("-k", type=int, required=True)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force verdict")
    o.add_argument("--input", required=True)
    o.add_argument("-k", type=int, required=True)
    o.add_argument("--rows", type=int)
    o.add_argument("--min-side", type=int, default=1)
    o.add_argument("--method", choices=["edges", "partition"], default="edges")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="run a directory of instances into a CSV table")
    b.add_argument("--dir", required=True)
    b.add_argument("--output", required=True)
    b.add_argument("--command", choices=["solve", "path", "kernelize", "oracle"], default="solve")
    b.add_argument("-k", type=int)
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--min-side", type=int, default=1, help="oracle command: smallest grid side")
    b.add_argument("--method", choices=["edges", "partition"], default="edges", help="oracle command: search method")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if a.cmd == "solve":
            _parse_mode(a.mode)
        return a.func(a)
    except gio.ParseError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except argparse.ArgumentTypeError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except (GraphError, ValueError) as exc:
        _err(str(exc))
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
