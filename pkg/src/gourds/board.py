"""Boards: finite hexagonal cell sets with labels, parsing, and the
proper-board validator.

A cell label is stored in its text form: "." (blank), "c<k>" (color k >= 0),
or "#<k>" (number k >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import BoardParseError
from .hexgeom import HexCoord, canonical_form, neighbors

BLANK = "."


def color_label(k: int) -> str:
    return f"c{k}"


def number_label(k: int) -> str:
    return f"#{k}"


def is_color(label: str) -> bool:
    return label.startswith("c")


def is_number(label: str) -> bool:
    return label.startswith("#")


def label_value(label: str) -> int:
    """Numeric id of a color or number label."""
    return int(label[1:])


def _check_label(token: str) -> str:
    if token == BLANK:
        return token
    if token.startswith("c") and token[1:].isdigit():
        return token
    if token.startswith("#") and token[1:].isdigit() and int(token[1:]) >= 1:
        return token
    raise ValueError(f"bad label {token!r}")


@dataclass(frozen=True)
class Board:
    cells: frozenset[HexCoord]
    labels: dict[HexCoord, str] = field(default_factory=dict)

    def __post_init__(self):
        for c in self.labels:
            if c not in self.cells:
                raise ValueError(f"labeled coordinate {c} is not a cell")

    def label(self, c: HexCoord) -> str:
        return self.labels.get(c, BLANK)

    @property
    def n(self) -> int:
        """Number of gourds a full configuration holds (cells = 2n + 1)."""
        return (len(self.cells) - 1) // 2


@dataclass(frozen=True)
class PropernessReport:
    odd_size: bool
    connected: bool
    two_connected: bool
    hole_free: bool
    is_star_of_david: bool

    @property
    def proper(self) -> bool:
        return (
            self.odd_size
            and self.connected
            and self.two_connected
            and self.hole_free
            and not self.is_star_of_david
        )

    def __str__(self) -> str:
        parts = [
            f"odd_size: {self.odd_size}",
            f"connected: {self.connected}",
            f"two_connected: {self.two_connected}",
            f"hole_free: {self.hole_free}",
            f"is_star_of_david: {self.is_star_of_david}",
            f"proper: {self.proper}",
        ]
        return "\n".join(parts)


def make_board(coords, labels=None) -> Board:
    cells = frozenset(HexCoord(q, r) for q, r in coords)
    labels = {HexCoord(q, r): v for (q, r), v in (labels or {}).items()}
    return Board(cells, labels)


def parse_board(text: str) -> Board:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "gourds-board v1":
        raise BoardParseError("expected header 'gourds-board v1'", 1)
    cells: dict[HexCoord, str] = {}
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise BoardParseError("expected 'q r label'", i)
        try:
            c = HexCoord(int(parts[0]), int(parts[1]))
        except ValueError:
            raise BoardParseError(f"bad coordinate {parts[0]!r} {parts[1]!r}", i)
        try:
            label = _check_label(parts[2])
        except ValueError as exc:
            raise BoardParseError(str(exc), i)
        if c in cells:
            raise BoardParseError(f"duplicate cell {c}", i)
        cells[c] = label
    if not cells:
        raise BoardParseError("board has no cells")
    board = Board(frozenset(cells), {c: v for c, v in cells.items() if v != BLANK})
    if not _is_connected(board.cells):
        raise BoardParseError("cell set is disconnected")
    return board


def serialize_board(b: Board) -> str:
    lines = ["gourds-board v1"]
    for c in sorted(b.cells):
        lines.append(f"{c.q} {c.r} {b.label(c)}")
    return "\n".join(lines) + "\n"


def board_graph(b: Board) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(b.cells)
    for c in b.cells:
        for d in neighbors(c):
            if d in b.cells:
                g.add_edge(c, d)
    return g


def _is_connected(cells: frozenset[HexCoord]) -> bool:
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for d in neighbors(c):
            if d in cells and d not in seen:
                seen.add(d)
                stack.append(d)
    return len(seen) == len(cells)


def _is_hole_free(cells: frozenset[HexCoord]) -> bool:
    """Flood-fill the complement inside the bounding box expanded by one
    ring; a complement component not reaching the expanded boundary is a
    hole."""
    qs = [c.q for c in cells]
    rs = [c.r for c in cells]
    qlo, qhi = min(qs) - 1, max(qs) + 1
    rlo, rhi = min(rs) - 1, max(rs) + 1
    start = HexCoord(qlo, rlo)
    seen = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for d in neighbors(c):
            if qlo <= d.q <= qhi and rlo <= d.r <= rhi and d not in cells and d not in seen:
                seen.add(d)
                stack.append(d)
    total_complement = sum(
        1
        for q in range(qlo, qhi + 1)
        for r in range(rlo, rhi + 1)
        if HexCoord(q, r) not in cells
    )
    return len(seen) == total_complement


# The 13-cell Star of David: a center cell, its six neighbors, and the six
# "tip" cells adjacent to consecutive ring pairs.
STAR_OF_DAVID_COORDS: tuple[tuple[int, int], ...] = (
    (0, 0),
    (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1),
    (1, 1), (-1, -1), (-1, 2), (-2, 1), (1, -2), (2, -1),
)

_STAR_CANONICAL = canonical_form(HexCoord(q, r) for q, r in STAR_OF_DAVID_COORDS)


def star_of_david_board() -> Board:
    return make_board(STAR_OF_DAVID_COORDS)


def is_star_of_david(b: Board) -> bool:
    if len(b.cells) != 13:
        return False
    return canonical_form(b.cells) == _STAR_CANONICAL


def validate_proper(b: Board) -> PropernessReport:
    connected = _is_connected(b.cells)
    if len(b.cells) < 3:
        two_connected = False
    elif not connected:
        two_connected = False
    else:
        g = board_graph(b)
        two_connected = next(nx.articulation_points(g), None) is None
    return PropernessReport(
        odd_size=len(b.cells) % 2 == 1,
        connected=connected,
        two_connected=two_connected,
        hole_free=_is_hole_free(b.cells),
        is_star_of_david=is_star_of_david(b),
    )
