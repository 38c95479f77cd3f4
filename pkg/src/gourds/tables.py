"""Packed integer representation of a board and its configurations.

Cells are numbered 0..L-1 in sorted coordinate order.  A configuration of n
gourds is held as two parallel structures:

- occ: length-L list, occ[cell] = end id or -1 (empty / not a gourd cell);
- pos: length-2n list, pos[end] = cell id.

Gourd g owns end ids 2g (end_a) and 2g+1 (end_b), so two ends belong to the
same gourd iff their ids differ only in the lowest bit.

Moves are (tail, head, target, sharp_flag) cell-id tuples.  The bend of a move
is the angular-index difference d(head->target) - d(tail->head) mod 6:
0 = slide, 1/5 = turn, 2/4 = triangle (pivot, or sharp turn when the flag is
set).  3 would mean target = tail, which is never legal.
"""

from __future__ import annotations

import numpy as np

from .board import Board
from .errors import IllegalMoveError
from .hexgeom import ANGULAR_OFFSETS, HexCoord


class BoardTables:
    def __init__(self, board: Board):
        self.board = board
        self.cells: list[HexCoord] = sorted(board.cells)
        self.index: dict[HexCoord, int] = {c: i for i, c in enumerate(self.cells)}
        self.size = len(self.cells)
        nbr = []
        for c in self.cells:
            row = []
            for dq, dr in ANGULAR_OFFSETS:
                row.append(self.index.get(HexCoord(c.q + dq, c.r + dr), -1))
            nbr.append(row)
        self.nbr = nbr
        self.nbr_arr = np.array(nbr, dtype=np.int16)

    def dir_between(self, a: int, b: int) -> int:
        """Angular index of the step from cell a to adjacent cell b, or -1."""
        row = self.nbr[a]
        for d in range(6):
            if row[d] == b:
                return d
        return -1


def pack_config(tables: BoardTables, config) -> tuple[list[int], list[int], int]:
    occ = [-1] * tables.size
    pos = [0] * (2 * len(config.gourds))
    for g, gourd in enumerate(config.gourds):
        for bit, cell in ((0, gourd.end_a), (1, gourd.end_b)):
            try:
                i = tables.index[cell]
            except KeyError:
                raise IllegalMoveError(f"gourd cell {cell} is off the board")
            if occ[i] != -1:
                raise IllegalMoveError(f"cell {cell} covered twice")
            occ[i] = 2 * g + bit
            pos[2 * g + bit] = i
    try:
        empty = tables.index[config.empty]
    except KeyError:
        raise IllegalMoveError(f"empty cell {config.empty} is off the board")
    if occ[empty] != -1:
        raise IllegalMoveError(f"empty cell {config.empty} covered by a gourd")
    if 2 * len(config.gourds) + 1 != tables.size:
        raise IllegalMoveError("configuration does not cover the board exactly")
    return occ, pos, empty


def unpack_config(tables: BoardTables, pos: list[int], template):
    """Rebuild a Configuration from packed end positions; labels are carried
    over from the template configuration's gourds by id."""
    from .puzzle import Configuration, Gourd

    used = set(pos)
    gourds = []
    for g, old in enumerate(template.gourds):
        gourds.append(
            Gourd(
                tables.cells[pos[2 * g]],
                tables.cells[pos[2 * g + 1]],
                old.label_a,
                old.label_b,
            )
        )
    (empty,) = set(range(tables.size)) - used
    return Configuration(tuple(gourds), tables.cells[empty])


def pack_moves(tables: BoardTables, moves) -> list[tuple[int, int, int, int]]:
    packed = []
    for i, m in enumerate(moves):
        try:
            t = tables.index[m.tail]
            h = tables.index[m.head]
            tg = tables.index[m.target]
        except KeyError:
            raise IllegalMoveError("move cell is off the board", i)
        packed.append((t, h, tg, 1 if m.kind == "sharp" else 0))
    return packed


def state_key(pos: list[int]) -> bytes:
    return np.asarray(pos, dtype=np.int16).tobytes()
