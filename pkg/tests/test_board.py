import random

import pytest

from gourds.board import (
    board_graph,
    is_star_of_david,
    make_board,
    parse_board,
    serialize_board,
    star_of_david_board,
    validate_proper,
)
from gourds.boards import annulus_board, flower_board, random_proper_board
from gourds.errors import BoardParseError
from gourds.hexgeom import HexCoord, normalize_translation, symmetries


def test_parse_minimal_board():
    b = parse_board("gourds-board v1\n0 0 .\n1 0 .\n0 1 .\n")
    assert len(b.cells) == 3
    g = board_graph(b)
    assert g.number_of_edges() == 3  # K3


def test_parse_labels_and_comments():
    text = "gourds-board v1\n# a comment\n0 0 c1\n1 0 #2\n0 1 .\n"
    b = parse_board(text)
    assert b.label(HexCoord(0, 0)) == "c1"
    assert b.label(HexCoord(1, 0)) == "#2"
    assert b.label(HexCoord(0, 1)) == "."


def test_parse_duplicate_cell():
    with pytest.raises(BoardParseError):
        parse_board("gourds-board v1\n0 0 .\n0 0 .\n1 0 .\n")


def test_parse_bad_header():
    with pytest.raises(BoardParseError) as exc:
        parse_board("not a board\n")
    assert exc.value.line == 1


def test_round_trip(triangle):
    assert parse_board(serialize_board(triangle)).cells == triangle.cells
    b = random_proper_board(21, 5)
    b2 = parse_board(serialize_board(b))
    assert b2.cells == b.cells and b2.labels == b.labels


def test_triangle_proper(triangle):
    report = validate_proper(triangle)
    assert report.proper
    assert report.odd_size and report.two_connected and report.hole_free


def test_star_of_david_improper():
    star = star_of_david_board()
    assert len(star.cells) == 13
    report = validate_proper(star)
    assert report.is_star_of_david
    assert not report.proper
    assert report.odd_size and report.two_connected and report.hole_free


def test_star_detection_symmetry_invariant():
    star = star_of_david_board()
    for image in symmetries(star.cells):
        shifted = [HexCoord(q + 7, r - 2) for q, r in normalize_translation(image)]
        assert is_star_of_david(make_board(shifted))
    # any other 13-cell set is not flagged
    b13 = random_proper_board(13, 3)
    assert not is_star_of_david(b13) or validate_proper(b13).proper is False


def test_annulus_has_hole():
    report = validate_proper(annulus_board())
    assert not report.hole_free
    assert not report.proper
    assert report.two_connected


def test_even_board_improper():
    b = make_board([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert not validate_proper(b).odd_size


def test_disconnected_board():
    b = make_board([(0, 0), (1, 0), (0, 1), (5, 5), (6, 5), (5, 6)])
    report = validate_proper(b)
    assert not report.connected and not report.proper


def test_flower_board_graph():
    g = board_graph(flower_board())
    assert g.number_of_nodes() == 7
    assert g.number_of_edges() == 12


def _two_connected_brute(cells) -> bool:
    cells = set(cells)
    if len(cells) < 3:
        return False
    from gourds.hexgeom import neighbors

    for v in cells:
        rest = cells - {v}
        start = next(iter(rest))
        seen = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for d in neighbors(c):
                if d in rest and d not in seen:
                    seen.add(d)
                    stack.append(d)
        if len(seen) != len(rest):
            return False
    return True


def test_two_connected_matches_brute_force():
    rng = random.Random(0)
    # random blobs, including ones with deliberate cut cells
    for trial in range(60):
        cells = {HexCoord(0, 0)}
        from gourds.hexgeom import neighbors

        while len(cells) < rng.randrange(3, 14):
            c = rng.choice(sorted(cells))
            d = rng.choice(neighbors(c))
            cells.add(d)
        b = make_board(cells)
        assert validate_proper(b).two_connected == _two_connected_brute(cells)
