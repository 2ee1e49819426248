import itertools
import random

import pytest

from gridctl.bounded import solve_annotated
from gridctl.graph import Corners, GraphError, build_grid, from_edge_list, grid_vertex, recognize_grid
from gridctl.grid import (
    HorizontalDecomposition,
    apply_rr1,
    check_decomposition,
    corner_symmetries,
    enumerate_guesses,
    find_horizontal_decomposition,
    find_row_separator_grid,
    lift_rr1,
    solve,
)
from gridctl.instances import split_grid
from gridctl.oracle import brute_force_grid, verify_witness

from support import cycle, small_corpus

K4 = from_edge_list(4, itertools.combinations(range(1, 5), 2))
K5 = from_edge_list(5, itertools.combinations(range(1, 6), 2))
DIAMOND = from_edge_list(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])


def grid_corners(r, q):
    return Corners(grid_vertex(q, 1, 1), grid_vertex(q, 1, q), grid_vertex(q, r, q), grid_vertex(q, r, 1))


class TestRowSeparator:
    def test_tall_grid(self):
        g = build_grid(4, 3)
        assert find_row_separator_grid(g, 4, 7) == ((4, 5, 6), (7, 8, 9))

    def test_cycle_and_clique(self):
        assert find_row_separator_grid(cycle(4), 1, 2) is None
        assert all(find_row_separator_grid(K4, u, v) is None for u, v in K4.edges())

    def test_non_edge(self):
        assert find_row_separator_grid(build_grid(3, 3), 1, 5) is None

    def test_branching_variant_agrees_on_grids(self):
        g = build_grid(5, 3)
        assert find_row_separator_grid(g, 4, 7, branching=True) == ((4, 5, 6), (7, 8, 9))


class TestDecomposition:
    def test_five_by_two(self):
        g = build_grid(5, 2)
        d = find_horizontal_decomposition(g, grid_corners(5, 2))
        assert d is not None
        check_decomposition(g, d, grid_corners(5, 2))
        assert d.q == 2
        assert recognize_grid(g).rows == 2

    def test_none_on_small_cases(self):
        assert find_horizontal_decomposition(cycle(4), Corners(1, 2, 3, 4)) is None
        assert find_horizontal_decomposition(build_grid(2, 4), grid_corners(2, 4)) is None

    def test_corners_must_lie_outside(self):
        g = build_grid(4, 2)
        # x1 on the second row cannot sit in C12 of the only middle decomposition
        assert find_horizontal_decomposition(g, Corners(3, 2, 8, 7)) is None

    def test_invalid_decompositions_raise(self):
        g = build_grid(4, 2)
        good = HorizontalDecomposition((1, 2), (3, 4), (5, 6), (7, 8))
        check_decomposition(g, good)
        bad = [
            HorizontalDecomposition((1, 2), (3, 4), (5,), (6, 7, 8)),
            HorizontalDecomposition((1, 2), (4, 3), (5, 6), (7, 8)),
            HorizontalDecomposition((1,), (2, 3, 4), (5, 6), (7, 8)),
            HorizontalDecomposition((1, 2, 3, 4), (), (5, 6), (7, 8)),
        ]
        for d in bad:
            with pytest.raises(GraphError):
                check_decomposition(g, d)

    def test_rr1_on_four_by_two(self):
        g = build_grid(4, 2)
        c = grid_corners(4, 2)
        d = find_horizontal_decomposition(g, c)
        red = apply_rr1(g, d, 0, 4, 2, c)
        w = recognize_grid(red.graph)
        assert (w.rows, w.cols) == (2, 3) and red.r == 3
        assert red.graph.n == 6

    def test_rr1_rejects_wrong_width(self):
        g = build_grid(4, 2)
        c = grid_corners(4, 2)
        d = find_horizontal_decomposition(g, c)
        with pytest.raises(GraphError):
            apply_rr1(g, d, 0, 4, 3, c)

    def test_lift_round_trip(self):
        g = build_grid(4, 2)
        c = grid_corners(4, 2)
        d = find_horizontal_decomposition(g, c)
        red = apply_rr1(g, d, 0, 4, 2, c)
        res = solve_annotated(red.graph, 0, 3, 2, red.corners)
        assert res.yes
        lifted = lift_rr1(g, d, red.label, res.certificate, 0)
        assert lifted is not None and verify_witness(g, lifted, 0).ok


class TestGuesses:
    def test_symmetry_group_sizes(self):
        assert len(corner_symmetries(False)) == 4
        assert len(corner_symmetries(True)) == 8

    def test_four_vertices(self):
        gs = enumerate_guesses(cycle(4), 0)
        assert {(x.r, x.q) for x in gs} == {(2, 2)}
        assert len(gs) == 24 // 8

    def test_shapes(self):
        g6 = build_grid(2, 3)
        assert {(x.r, x.q) for x in enumerate_guesses(g6, 1)} == {(2, 3)}
        g9 = build_grid(3, 3)
        assert {(x.r, x.q) for x in enumerate_guesses(g9, 2)} == {(2, 4), (3, 3)}

    def test_orbits_cover_all_tuples(self):
        # every ordered tuple is the image of exactly one listed guess
        g = build_grid(2, 3)
        listed = {x.corners for x in enumerate_guesses(g, 0)}
        syms = corner_symmetries(False)
        images = [tuple(c[i] for i in s) for c in listed for s in syms]
        assert sorted(images) == sorted(itertools.permutations(g.vertices(), 4))


class TestSolve:
    def test_grid(self):
        res = solve(build_grid(3, 3), 0)
        assert res.yes and verify_witness(build_grid(3, 3), res.certificate, 0).ok

    def test_diamond(self):
        res = solve(DIAMOND, 1)
        assert res.yes and verify_witness(DIAMOND, res.certificate, 1).ok

    def test_k5(self):
        for k in range(4):
            assert solve(K5, k).yes == brute_force_grid(K5, k).yes

    def test_disconnected(self):
        assert not solve(from_edge_list(4, [(1, 2), (3, 4)]), 3).yes

    def test_negative_k(self):
        with pytest.raises(ValueError):
            solve(cycle(4), -1)

    def test_against_oracle(self):
        rng = random.Random(8)
        for g in small_corpus(40, 55, max_n=7, max_m=11):
            k = rng.randint(0, 3)
            res = solve(g, k)
            assert res.yes == brute_force_grid(g, k).yes, (g.edges(), k)
            if res.yes:
                assert verify_witness(g, res.certificate, k).ok

    def test_branching_separator_same_verdicts(self):
        for seed in range(4):
            g, k, _ = split_grid(2, 3, 1, seed)
            assert solve(g, k, branching=True).yes

    def test_planted_long_grid(self):
        g, k, _ = split_grid(6, 2, 0, 1)
        res = solve(g, k)
        assert res.yes
        assert res.reduced_graph is None
        assert verify_witness(g, res.certificate, k).ok
