"""Shared fixtures and small helpers for the test suite."""

from __future__ import annotations

import math

import pytest

from gourds.board import Board, make_board
from gourds.boards import aligned_configuration, numbered_labels
from gourds.hamilton import find_hamiltonian
from gourds.hexgeom import HexCoord, neighbors
from gourds.puzzle import Configuration, Gourd


@pytest.fixture
def triangle():
    return make_board([(0, 0), (1, 0), (0, 1)])


@pytest.fixture
def row3():
    return make_board([(0, 0), (1, 0), (2, 0)])


def numbered_config(board: Board) -> Configuration:
    """Canonical numbered configuration: gourds laid along a Hamiltonian
    cycle of the board."""
    h = find_hamiltonian(board)
    return aligned_configuration(h, numbered_labels(board.n))


def count_matchings_with_empty(board: Board) -> int:
    """Independent count of (empty cell, perfect matching of the rest)
    combos, by direct recursion on the adjacency lists."""
    cells = sorted(board.cells)
    index = {c: i for i, c in enumerate(cells)}
    adj = [
        [index[d] for d in neighbors(c) if d in index] for c in cells
    ]

    def count(avail: frozenset[int]) -> int:
        if not avail:
            return 1
        v = min(avail)
        return sum(count(avail - {v, w}) for w in adj[v] if w in avail)

    full = frozenset(range(len(cells)))
    return sum(count(full - {e}) for e in range(len(cells)))


def expected_state_count(board: Board) -> int:
    """Number of distinct numbered configurations: every placement times
    every assignment of n distinguishable, orientable gourds."""
    n = board.n
    return count_matchings_with_empty(board) * math.factorial(n) * 2**n
