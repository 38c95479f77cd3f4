"""Gourd configurations, the three move primitives, legality, sequence
verification, and the BFS reachability oracle.

Move parameterization: `tail` and `head` are the moved gourd's cells before
the move (head is the end that moves first), `target` is the empty cell.  The
kind is derived from geometry: slide when the three cells are collinear, turn
for a 120-degree bend, pivot when tail is also adjacent to target (the three
cells form a unit triangle).  Under sharp-turn rules the triangle geometry
rotates both ends instead ("sharp"), which is strictly weaker than the pivot.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .board import Board
from .errors import BoardParseError, ColorMismatchError, IllegalMoveError, StateSpaceLimitError
from .hexgeom import HexCoord, adjacent, direction_index
from . import kernel
from .tables import BoardTables, pack_config, pack_moves, unpack_config

PIVOT_RULES = "pivot"
SHARP_TURN_RULES = "sharp"

STATE_GUARD_DEFAULT = 10_000_000


class Gourd(NamedTuple):
    end_a: HexCoord
    end_b: HexCoord
    label_a: str = "."
    label_b: str = "."

    @property
    def cells(self) -> frozenset[HexCoord]:
        return frozenset((self.end_a, self.end_b))


class Move(NamedTuple):
    tail: HexCoord
    head: HexCoord
    target: HexCoord
    kind: str


@dataclass(frozen=True)
class Configuration:
    gourds: tuple[Gourd, ...]
    empty: HexCoord

    def covered(self) -> dict[HexCoord, tuple[int, str]]:
        """Map cell -> (gourd index, end label) for all gourd cells."""
        out = {}
        for i, g in enumerate(self.gourds):
            out[g.end_a] = (i, g.label_a)
            out[g.end_b] = (i, g.label_b)
        return out

    def cell_labels(self) -> dict[HexCoord, str]:
        out = {}
        for g in self.gourds:
            out[g.end_a] = g.label_a
            out[g.end_b] = g.label_b
        return out


def move_kind(tail: HexCoord, head: HexCoord, target: HexCoord, sharp: bool = False) -> str:
    """Classify the (tail, head, target) geometry; raises on non-adjacency."""
    if not adjacent(tail, head):
        raise IllegalMoveError(f"tail {tail} not adjacent to head {head}")
    if not adjacent(head, target):
        raise IllegalMoveError(f"target {target} not adjacent to head {head}")
    d1 = direction_index(tail, head)
    d2 = direction_index(head, target)
    delta = (d2 - d1) % 6
    if delta == 0:
        kind = "slide"
    elif delta in (1, 5):
        kind = "turn"
    elif delta in (2, 4):
        kind = "sharp" if sharp else "pivot"
    else:
        raise IllegalMoveError("target coincides with tail")
    if sharp and kind != "sharp":
        raise IllegalMoveError("sharp rules replace only the triangle geometry")
    return kind


def make_move(tail, head, target, sharp: bool = False) -> Move:
    tail, head, target = HexCoord(*tail), HexCoord(*head), HexCoord(*target)
    return Move(tail, head, target, move_kind(tail, head, target, sharp))


def _check_cover(b: Board, c: Configuration) -> None:
    cells = set()
    for g in c.gourds:
        if not adjacent(g.end_a, g.end_b):
            raise IllegalMoveError(f"gourd ends {g.end_a},{g.end_b} not adjacent")
        cells.add(g.end_a)
        cells.add(g.end_b)
    cells.add(c.empty)
    if len(cells) != 2 * len(c.gourds) + 1 or cells != set(b.cells):
        raise IllegalMoveError("configuration does not cover the board exactly")


def legal_moves(b: Board, c: Configuration, mode: str = PIVOT_RULES) -> list[Move]:
    _check_cover(b, c)
    t = BoardTables(b)
    occ, pos, empty = pack_config(t, c)
    out = []
    for tail, head, target, sharp in kernel.successors(t, occ, pos, empty, mode == SHARP_TURN_RULES):
        out.append(make_move(t.cells[tail], t.cells[head], t.cells[target], sharp == 1))
    return out


def apply_move(c: Configuration, m: Move) -> Configuration:
    if m.target != c.empty:
        raise IllegalMoveError(f"target {m.target} is not the empty cell {c.empty}")
    kind = move_kind(m.tail, m.head, m.target, m.kind == "sharp")
    if kind != m.kind:
        raise IllegalMoveError(f"move kind {m.kind!r} does not match geometry {kind!r}")
    gi = None
    for i, g in enumerate(c.gourds):
        if g.cells == frozenset((m.tail, m.head)):
            gi = i
            break
    if gi is None:
        raise IllegalMoveError(f"no gourd occupies {m.tail},{m.head}")
    g = c.gourds[gi]

    def shift(cell: HexCoord) -> HexCoord:
        if cell == m.head:
            return m.target
        return cell if kind == "pivot" else m.head

    new_g = Gourd(shift(g.end_a), shift(g.end_b), g.label_a, g.label_b)
    new_empty = m.head if kind == "pivot" else m.tail
    gourds = list(c.gourds)
    gourds[gi] = new_g
    return Configuration(tuple(gourds), new_empty)


def invert_move(m: Move) -> Move:
    """The move undoing m (applied to the post-move configuration)."""
    if m.kind == "pivot":
        return Move(m.tail, m.target, m.head, "pivot")
    return Move(m.target, m.head, m.tail, m.kind)


def verify_sequence(b: Board, start: Configuration, moves: list[Move]) -> Configuration:
    _check_cover(b, start)
    for i, m in enumerate(moves):
        try:
            kind = move_kind(m.tail, m.head, m.target, m.kind == "sharp")
        except IllegalMoveError as exc:
            raise IllegalMoveError(str(exc), i)
        if kind != m.kind:
            raise IllegalMoveError(f"kind {m.kind!r} does not match geometry", i)
    t = BoardTables(b)
    occ, pos, empty = pack_config(t, start)
    packed = pack_moves(t, moves)
    fail, empty = kernel.replay(t, occ, pos, empty, packed)
    if fail >= 0:
        raise IllegalMoveError("illegal move during replay", fail)
    return unpack_config(t, pos, start)


def state_guard() -> int:
    value = os.environ.get("GOURDS_STATE_GUARD")
    return int(value) if value else STATE_GUARD_DEFAULT


def count_reachable(b: Board, start: Configuration, mode: str = PIVOT_RULES) -> int:
    _check_cover(b, start)
    t = BoardTables(b)
    occ, pos, empty = pack_config(t, start)
    count, _ = kernel.bfs(t, occ, pos, empty, mode == SHARP_TURN_RULES, state_guard())
    if count < 0:
        raise StateSpaceLimitError(f"state space exceeds guard of {state_guard()}")
    return count


def reach_states(b: Board, start: Configuration, mode: str = PIVOT_RULES) -> set[Configuration]:
    _check_cover(b, start)
    t = BoardTables(b)
    occ, pos, empty = pack_config(t, start)
    count, keys = kernel.bfs(t, occ, pos, empty, mode == SHARP_TURN_RULES, state_guard())
    if count < 0:
        raise StateSpaceLimitError(f"state space exceeds guard of {state_guard()}")
    import numpy as np

    out = set()
    for key in keys:
        decoded = np.frombuffer(key, dtype=np.int16).tolist()
        out.add(unpack_config(t, decoded, start))
    return out


def scramble(b: Board, c: Configuration, steps: int, seed: int,
             mode: str = PIVOT_RULES) -> tuple[Configuration, list[Move]]:
    rng = random.Random(seed)
    trace: list[Move] = []
    current = c
    for _ in range(steps):
        options = legal_moves(b, current, mode)
        if not options:
            break
        m = rng.choice(options)
        current = apply_move(current, m)
        trace.append(m)
    return current, trace


def color_assignment(start: Configuration, target_board: Board) -> dict[Gourd, tuple[HexCoord, HexCoord]]:
    """Assign each gourd an oriented target cell pair on a colored board.

    The target board must be fully labeled except one blank cell (the final
    empty cell).  A perfect tiling matching the gourds' label-pair multiset is
    computed; gourds are matched to tiles greedily within each label-pair
    class, in listing order.
    """
    from .placement import search_tiling

    blanks = [c for c in target_board.cells if target_board.label(c) == "."]
    if len(blanks) != 1:
        raise ColorMismatchError(
            f"target board must have exactly one blank cell, found {len(blanks)}"
        )
    budget: dict[tuple[str, str], int] = {}
    for g in start.gourds:
        key = tuple(sorted((g.label_a, g.label_b)))
        budget[key] = budget.get(key, 0) + 1
    tiling = search_tiling(target_board, budget, forced_empty=blanks[0])
    if tiling is None:
        raise ColorMismatchError("no tiling of the target board matches the gourd labels")
    pools: dict[tuple[str, str], list[tuple[HexCoord, HexCoord]]] = {}
    for a, bcell in tiling:
        key = tuple(sorted((target_board.label(a), target_board.label(bcell))))
        pools.setdefault(key, []).append((a, bcell))
    out = {}
    for g in start.gourds:
        key = tuple(sorted((g.label_a, g.label_b)))
        a, bcell = pools[key].pop(0)
        if target_board.label(a) == g.label_a:
            out[g] = (a, bcell)
        else:
            out[g] = (bcell, a)
    return out


def parse_config(text: str) -> Configuration:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "gourds-config v1":
        raise BoardParseError("expected header 'gourds-config v1'", 1)
    gourds: list[Gourd] = []
    empty = None
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "g" and len(parts) == 7:
            try:
                a = HexCoord(int(parts[1]), int(parts[2]))
                bb = HexCoord(int(parts[4]), int(parts[5]))
            except ValueError:
                raise BoardParseError("bad gourd coordinates", i)
            gourds.append(Gourd(a, bb, parts[3], parts[6]))
        elif parts[0] == "e" and len(parts) == 3:
            if empty is not None:
                raise BoardParseError("duplicate empty cell line", i)
            empty = HexCoord(int(parts[1]), int(parts[2]))
        else:
            raise BoardParseError(f"unrecognized line {line!r}", i)
    if empty is None:
        raise BoardParseError("missing empty cell line")
    return Configuration(tuple(gourds), empty)


def serialize_config(c: Configuration) -> str:
    lines = ["gourds-config v1"]
    for g in c.gourds:
        lines.append(
            f"g {g.end_a.q} {g.end_a.r} {g.label_a} {g.end_b.q} {g.end_b.r} {g.label_b}"
        )
    lines.append(f"e {c.empty.q} {c.empty.r}")
    return "\n".join(lines) + "\n"


def parse_moves(text: str) -> list[Move]:
    moves = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        parts = line.split()
        if parts[0] != "m" or len(parts) != 7:
            raise BoardParseError(f"unrecognized move line {line!r}", i)
        tail = HexCoord(int(parts[1]), int(parts[2]))
        head = HexCoord(int(parts[3]), int(parts[4]))
        target = HexCoord(int(parts[5]), int(parts[6]))
        moves.append(make_move(tail, head, target))
    return moves


def serialize_moves(moves: Iterable[Move]) -> str:
    lines = []
    for m in moves:
        lines.append(
            f"m {m.tail.q} {m.tail.r} {m.head.q} {m.head.r} {m.target.q} {m.target.r}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
