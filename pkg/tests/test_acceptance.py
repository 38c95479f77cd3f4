"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints a single summary line; the pytest verdict for that test is
the pass/fail line for its criterion.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter

import numpy as np
import pytest

from gourds.board import Board, make_board, validate_proper, star_of_david_board
from gourds.boards import (
    aligned_configuration,
    enumerate_proper_boards,
    exchange_strip_instance,
    numbered_labels,
    random_proper_board,
)
from gourds.hamilton import (
    balanced_split,
    check_cycle,
    deg3_runs,
    dual_tree,
    find_hamiltonian,
    repair_seven_runs,
    triangulate,
)
from gourds.hexgeom import HexCoord, neighbors
from gourds.placement import (
    F_COLOR,
    V_COLOR,
    Formula1in3,
    brute_1in3sat,
    enumerate_placements,
    instance_problems,
    reduce_1in3sat,
    search_tiling,
    solve_placement,
    validate_formula,
    verify_reduction,
)
from gourds.puzzle import (
    Configuration,
    Gourd,
    count_reachable,
    reach_states,
    scramble,
    verify_sequence,
)
from gourds.solver import displacement_lower_bound, solve
from tests.conftest import expected_state_count, numbered_config


def _ok(criterion: int, detail: str) -> None:
    print(f"criterion {criterion}: PASS ({detail})")


# --- 1: the 3-cell board has 6 pivot states and 3 sharp-turn states ----------

def test_criterion_1_triangle_state_counts():
    b = make_board([(0, 0), (1, 0), (0, 1)])
    c = numbered_config(b)
    assert count_reachable(b, c, "pivot") == 6
    assert count_reachable(b, c, "sharp") == 3
    _ok(1, "triangle: 6 pivot states, 3 sharp-turn states")


# --- 2: the 13-cell star is improper and freezes every gourd -----------------

def test_criterion_2_star_board_is_stuck():
    star = star_of_david_board()
    report = validate_proper(star)
    assert not report.proper
    assert report.is_star_of_david

    pairs = search_tiling(star, {(".", "."): 6})
    assert pairs is not None
    covered = {c for p in pairs for c in p}
    (empty,) = set(star.cells) - covered
    gourds = tuple(
        Gourd(a, b, f"#{2 * i + 1}", f"#{2 * i + 2}")
        for i, (a, b) in enumerate(sorted(pairs))
    )
    start = Configuration(gourds, empty)

    states = reach_states(star, start, "pivot")
    for g in start.gourds:
        placements = set()
        for s in states:
            (match,) = [x for x in s.gourds if x.label_a == g.label_a]
            placements.add(frozenset(match.cells))
        assert len(placements) == 3, f"gourd {g.label_a} visits {len(placements)} cell pairs"
    _ok(2, f"improper 13-cell board, {len(states)} states, every gourd held to 3 cell pairs")


# --- 3: every small proper board is fully reconfigurable ---------------------

def _all_numbered_configs(board: Board) -> list[Configuration]:
    """Every way to place n distinguishable oriented gourds plus one empty."""
    cells = sorted(board.cells)
    adj = {c: [d for d in neighbors(c) if d in board.cells] for c in cells}
    labels = numbered_labels(board.n)

    def matchings(avail: frozenset) -> list[tuple]:
        if not avail:
            return [()]
        v = min(avail)
        out = []
        for w in adj[v]:
            if w in avail:
                for rest in matchings(avail - {v, w}):
                    out.append(((v, w),) + rest)
        return out

    configs = []
    full = frozenset(cells)
    for empty in cells:
        for pairs in matchings(full - {empty}):
            for perm in itertools.permutations(range(len(pairs))):
                for flips in itertools.product((0, 1), repeat=len(pairs)):
                    gs = []
                    for slot, (a, b) in zip(perm, pairs):
                        la, lb = labels[slot]
                        if flips[slot]:
                            la, lb = lb, la
                        gs.append(Gourd(a, b, la, lb))
                    configs.append(Configuration(tuple(gs), empty))
    return configs


def _check_solved_pair(b, start, target):
    plan = solve(b, start, target)
    final = verify_sequence(b, start, plan.moves)
    assert final.cell_labels() == target.cell_labels()
    assert final.empty == target.empty


def test_criterion_3_small_boards_fully_connected():
    boards = enumerate_proper_boards(9)
    by_size = Counter(len(b.cells) for b in boards)
    assert by_size == {3: 1, 5: 1, 7: 4, 9: 16}

    solves = 0
    rng = random.Random(3)
    for b in boards:
        configs = _all_numbered_configs(b)
        canon = numbered_config(b)

        # independent connectivity check: one BFS reaches every configuration
        assert count_reachable(b, canon, "pivot") == len(configs)
        assert len(configs) == expected_state_count(b)

        if len(b.cells) <= 5:
            pairs = itertools.product(configs, configs)
        else:
            # every configuration appears as both a start and a target,
            # plus random start/target pairs
            pairs = itertools.chain(
                ((c, canon) for c in configs),
                ((canon, c) for c in configs),
                ((rng.choice(configs), rng.choice(configs)) for _ in range(100)),
            )
        for start, target in pairs:
            _check_solved_pair(b, start, target)
            solves += 1
    _ok(3, f"{len(boards)} boards, {solves} solved pairs, state counts exact")


# --- 4: cycle decomposition invariants on random boards ----------------------

def test_criterion_4_dual_tree_invariants():
    import networkx as nx

    rng = random.Random(4)
    sizes = [7, 9, 13, 401] + [rng.randrange(7, 402) | 1 for _ in range(196)]
    splits = 0
    for i, size in enumerate(sizes):
        b = random_proper_board(size, rng.randrange(1 << 30))
        h = find_hamiltonian(b)
        h = repair_seven_runs(b, h)
        check_cycle(b, h)
        d = dual_tree(triangulate(b, h), h)
        tree = d.tree
        n = b.n
        assert tree.number_of_nodes() == 2 * n - 1
        assert nx.is_tree(tree)
        degs = [tree.degree[x] for x in tree.nodes]
        assert max(degs) <= 3
        if tree.number_of_nodes() > 1:
            assert degs.count(1) == degs.count(3) + 2
        side_count: dict[HexCoord, int] = {}
        for _x, _y, data in tree.edges(data=True):
            for c in data["side"]:
                side_count[c] = side_count.get(c, 0) + 1
        assert all(v <= 4 for v in side_count.values())
        runs = deg3_runs(d)
        assert not runs or len(runs[0]) < 7

        split = balanced_split(b, h)
        m1, m2 = split.sizes
        m = len(h.order)
        assert m1 % 2 == 1 and m2 % 2 == 1
        assert min(m1, m2) >= m / 96 - 7, f"split {m1}/{m2} of {m}"
        splits += 1
    _ok(4, f"{len(sizes)} boards (7-401 cells), all tree and split invariants hold")


# --- 5: the exchange family needs quadratically many moves -------------------

def test_criterion_5_quadratic_scaling():
    ns = list(range(8, 41, 4))
    lbs = []
    ratios = []
    for n in ns:
        board, start, target = exchange_strip_instance(n)
        lb = displacement_lower_bound(board, start, target)
        plan = solve(board, start, target, "quadratic")
        final = verify_sequence(board, start, plan.moves)
        assert final.cell_labels() == target.cell_labels()
        assert final.empty == target.empty
        assert len(plan.moves) >= lb
        lbs.append(lb)
        ratios.append(len(plan.moves) / n**2)

    x = np.array(ns, dtype=float)
    y = np.array(lbs, dtype=float)
    coeffs = np.polyfit(x, y, 2)
    resid = y - np.polyval(coeffs, x)
    r2 = 1.0 - resid.dot(resid) / ((y - y.mean()) ** 2).sum()
    assert r2 >= 0.99, f"quadratic fit r2 = {r2:.4f}"
    assert coeffs[0] > 0
    spread = max(ratios) / min(ratios)
    assert spread <= 4.0, f"moves/n^2 spread = {spread:.3f}"
    _ok(5, f"lower-bound fit r2 = {r2:.4f}, moves/n^2 spread = {spread:.3f}")


# --- 6: both strategies agree on random instances ----------------------------

def test_criterion_6_strategies_agree():
    rng = random.Random(6)
    for i in range(100):
        size = rng.randrange(7, 102) | 1
        b = random_proper_board(size, rng.randrange(1 << 30))
        base = numbered_config(b)
        start, _ = scramble(b, base, 60, rng.randrange(1 << 30))
        target, _ = scramble(b, base, 60, rng.randrange(1 << 30))
        for strategy in ("cubic", "quadratic"):
            plan = solve(b, start, target, strategy)
            final = verify_sequence(b, start, plan.moves)
            assert final.cell_labels() == target.cell_labels(), f"{strategy} #{i}"
            assert final.empty == target.empty
    _ok(6, "100 random triples, cubic and quadratic plans both verify")


# --- 7: the placement reduction is sound at small sizes ----------------------

def _all_strict_formulas(n: int):
    """Every formula on n variables where each clause has 3 distinct
    variables and each variable occurs in exactly 3 clauses, treating
    formulas as clause multisets."""
    vs = tuple(chr(ord("a") + i) for i in range(n))
    candidates = list(itertools.combinations(vs, 3))
    out = []
    # 3 ends per clause and 3 occurrences per variable force m == n clauses
    for combo in itertools.combinations_with_replacement(candidates, n):
        occ = Counter(v for c in combo for v in c)
        if all(occ[v] == 3 for v in vs):
            out.append(Formula1in3(vs, tuple(combo)))
    return out


def test_criterion_7_reduction_sound():
    checked = 0
    for n in (3, 4):
        formulas = _all_strict_formulas(n)
        assert len(formulas) == 1  # the constraints pin down a single formula
        for f in formulas:
            validate_formula(f)
            i = reduce_1in3sat(f)
            assert instance_problems(i) == []
            report = verify_reduction(i, f)
            assert report.ok, str(report)
            sat = bool(brute_1in3sat(f))
            cfg = solve_placement(i)
            assert (cfg is not None) == sat
            if cfg is not None:
                used = Counter(
                    tuple(sorted((g.label_a, g.label_b))) for g in cfg.gourds
                )
                assert used == Counter(i.budget)
            checked += 1

    # the variable gadget admits exactly two covering classes
    from gourds.placement import PlacementInstance, _template

    t = _template("variable_gadget")
    labels = {
        (q, r): ("c2" if role == "x" else V_COLOR) for q, r, role in t["ring"]
    }
    ring = PlacementInstance(
        make_board(list(labels), labels),
        {("c2", "c2"): 3, (V_COLOR, V_COLOR): 3, ("c2", V_COLOR): 6},
    )
    sols = enumerate_placements(ring, 100)
    classes = {
        frozenset(
            Counter(tuple(sorted((g.label_a, g.label_b))) for g in s.gourds).items()
        )
        for s in sols
    }
    assert classes == {
        frozenset({(("c2", "c2"), 3), ((V_COLOR, V_COLOR), 3)}),
        frozenset({(("c1", "c2"), 6)}),
    }

    # the clause gadget admits a covering for each choice of true literal
    t = _template("clause_gadget")
    role_color = {"X": "c2", "Y": "c3", "Z": "c4", "V": V_COLOR}
    clabels = {
        (q, r): role_color[role] for q, r, role in t["left"] + t["right"]
    }
    cboard = make_board(list(clabels), clabels)
    for true_color in ("c2", "c3", "c4"):
        budget = {
            ("c2", "c3"): 1, ("c2", "c4"): 1, ("c3", "c4"): 1,
            tuple(sorted((true_color, V_COLOR))): 2,
            (V_COLOR, V_COLOR): 5,
        }
        for f_color in ("c2", "c3", "c4"):
            if f_color != true_color:
                budget[(f_color, f_color)] = 1
        assert enumerate_placements(PlacementInstance(cboard, budget), 50)

    _ok(7, f"{checked} formulas: placement solvable iff satisfiable, gadgets behave")


# --- 8: generated instances have the advertised size and color counts --------

def test_criterion_8_budget_arithmetic():
    for n in (3, 4):
        (f,) = _all_strict_formulas(n)
        m = len(f.clauses)
        i = reduce_1in3sat(f)
        assert i.total_gourds() == 20 * n + 20 * m
        assert len(i.board.cells) == 40 * n + 40 * m + 1

        cells = Counter(i.board.label(c) for c in i.board.cells)
        ends: Counter = Counter()
        for (a, b), cnt in i.budget.items():
            ends[a] += cnt
            ends[b] += cnt
        for color in set(cells) | set(ends):
            want = 1 if color == F_COLOR else 0
            assert cells[color] - ends[color] == want, color
    _ok(8, "gourds = 20n + 20m, cells = 40n + 40m + 1, single surplus F cell")
