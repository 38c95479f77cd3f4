import pytest

from gourds.board import make_board, star_of_david_board
from gourds.errors import (
    ColorMismatchError,
    IllegalMoveError,
    StateSpaceLimitError,
)
from gourds.hexgeom import HexCoord
from gourds.placement import search_tiling
from gourds.puzzle import (
    PIVOT_RULES,
    SHARP_TURN_RULES,
    Configuration,
    Gourd,
    apply_move,
    color_assignment,
    count_reachable,
    invert_move,
    legal_moves,
    make_move,
    parse_config,
    parse_moves,
    reach_states,
    scramble,
    serialize_config,
    serialize_moves,
    verify_sequence,
)
from tests.conftest import numbered_config


def one_gourd(a, b, empty, la="c1", lb="c2") -> Configuration:
    return Configuration((Gourd(HexCoord(*a), HexCoord(*b), la, lb),), HexCoord(*empty))


def test_triangle_two_pivots(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    moves = legal_moves(triangle, c)
    assert len(moves) == 2
    assert all(m.kind == "pivot" for m in moves)
    assert {(m.tail, m.head) for m in moves} == {
        (HexCoord(0, 0), HexCoord(1, 0)),
        (HexCoord(1, 0), HexCoord(0, 0)),
    }


def test_slide(row3):
    c = one_gourd((0, 0), (1, 0), (2, 0))
    moves = legal_moves(row3, c)
    assert len(moves) == 1
    m = moves[0]
    assert m.kind == "slide" and m.head == (1, 0) and m.target == (2, 0)
    after = apply_move(c, m)
    assert after.gourds[0].cells == {HexCoord(1, 0), HexCoord(2, 0)}
    assert after.empty == (0, 0)


def test_turn():
    b = make_board([(0, 0), (1, 0), (1, 1)])
    c = one_gourd((0, 0), (1, 0), (1, 1))
    moves = [m for m in legal_moves(b, c) if m.kind == "turn"]
    assert len(moves) == 1
    after = apply_move(c, moves[0])
    assert after.gourds[0].cells == {HexCoord(1, 0), HexCoord(1, 1)}
    assert after.empty == (0, 0)


def test_pivot_keeps_tail(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    m = make_move((0, 0), (1, 0), (0, 1))
    assert m.kind == "pivot"
    after = apply_move(c, m)
    assert after.gourds[0].cells == {HexCoord(0, 0), HexCoord(0, 1)}
    assert after.empty == (1, 0)
    # labels travel with their ends
    assert after.gourds[0].label_a == "c1"


def test_labels_travel_on_slide(row3):
    c = one_gourd((0, 0), (1, 0), (2, 0))
    after = apply_move(c, legal_moves(row3, c)[0])
    g = after.gourds[0]
    labels = {g.end_a: g.label_a, g.end_b: g.label_b}
    assert labels[HexCoord(1, 0)] == "c1"
    assert labels[HexCoord(2, 0)] == "c2"


def test_inverse_restores(triangle, row3):
    for b, c in ((triangle, one_gourd((0, 0), (1, 0), (0, 1))),
                 (row3, one_gourd((0, 0), (1, 0), (2, 0)))):
        for m in legal_moves(b, c):
            after = apply_move(c, m)
            assert apply_move(after, invert_move(m)) == c


def test_apply_move_rejects_wrong_target(row3):
    c = one_gourd((0, 0), (1, 0), (2, 0))
    with pytest.raises(IllegalMoveError):
        apply_move(c, make_move((1, 0), (0, 0), (2, 0)))


def test_coverage_invariant_random_walk():
    b = make_board([(q, r) for q in range(3) for r in range(3)])
    c = numbered_config(b)
    current, trace = scramble(b, c, 200, 11)
    cells = {e for g in current.gourds for e in g.cells} | {current.empty}
    assert cells == set(b.cells)
    assert verify_sequence(b, c, trace) == current


def test_verify_sequence_reports_bad_index(row3):
    c = one_gourd((0, 0), (1, 0), (2, 0))
    good = legal_moves(row3, c)[0]
    bad = make_move((0, 0), (1, 0), (2, 0))  # stale: empty moved after `good`
    with pytest.raises(IllegalMoveError) as exc:
        verify_sequence(row3, c, [good, bad])
    assert exc.value.index == 1


def test_reach_counts_triangle(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    assert count_reachable(triangle, c, PIVOT_RULES) == 6
    assert count_reachable(triangle, c, SHARP_TURN_RULES) == 3


def test_sharp_subset_of_pivot(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    sharp = reach_states(triangle, c, SHARP_TURN_RULES)
    pivot = reach_states(triangle, c, PIVOT_RULES)
    assert sharp < pivot


def test_sharp_turn_equals_two_pivots(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    for m in legal_moves(triangle, c, SHARP_TURN_RULES):
        after = apply_move(c, m)
        # some two-pivot composition reaches the same state
        two = {
            apply_move(apply_move(c, p1), p2)
            for p1 in legal_moves(triangle, c, PIVOT_RULES)
            for p2 in legal_moves(triangle, apply_move(c, p1), PIVOT_RULES)
        }
        assert after in two


def test_star_gourd_confined():
    star = star_of_david_board()
    pairs = search_tiling(star, {(".", "."): 6})
    assert pairs is not None
    covered = {c for p in pairs for c in p}
    (empty,) = set(star.cells) - covered
    gourds = tuple(
        Gourd(a, b, f"#{2 * i + 1}", f"#{2 * i + 2}")
        for i, (a, b) in enumerate(sorted(pairs))
    )
    start = Configuration(gourds, empty)
    states = reach_states(star, start, PIVOT_RULES)
    for i in range(6):
        placements = {frozenset(s.gourds[i].cells) for s in states}
        assert len(placements) == 3


def test_scramble_deterministic():
    b = make_board([(q, r) for q in range(3) for r in range(3)])
    c = numbered_config(b)
    assert scramble(b, c, 40, 9) == scramble(b, c, 40, 9)
    assert scramble(b, c, 0, 9) == (c, [])


def test_state_guard(monkeypatch):
    monkeypatch.setenv("GOURDS_STATE_GUARD", "5")
    b = make_board([(q, r) for q in range(3) for r in range(3)])
    c = numbered_config(b)
    with pytest.raises(StateSpaceLimitError):
        count_reachable(b, c)


def test_config_round_trip():
    b = make_board([(q, r) for q in range(3) for r in range(3)])
    c = numbered_config(b)
    assert parse_config(serialize_config(c)) == c


def test_moves_round_trip(triangle):
    c = one_gourd((0, 0), (1, 0), (0, 1))
    _, trace = scramble(triangle, c, 7, 2)
    assert parse_moves(serialize_moves(trace)) == trace


def test_color_assignment_numbered():
    b = make_board([(q, r) for q in range(3) for r in range(3)])
    start = numbered_config(b)
    labels = {}
    for g in start.gourds:
        labels[g.end_a] = g.label_a
        labels[g.end_b] = g.label_b
    target = make_board(b.cells, {tuple(c): v for c, v in labels.items()})
    assignment = color_assignment(start, target)
    for g, (a, bb) in assignment.items():
        assert {target.label(a), target.label(bb)} == {g.label_a, g.label_b}


def test_color_assignment_mismatch(triangle):
    start = one_gourd((0, 0), (1, 0), (0, 1), "c1", "c2")
    target = make_board(
        [(0, 0), (1, 0), (0, 1)],
        {(0, 0): "c1", (1, 0): "c3", (0, 1): "."},
    )
    with pytest.raises(ColorMismatchError):
        color_assignment(start, target)
