"""Axial hexagonal-grid geometry.

Coordinate convention: a cell is an axial integer pair (q, r).  Two cells are
adjacent iff their difference lies in the offset set N below.  The plane
embedding is position(q, r) = q*(1, 0) + r*(1/2, sqrt(3)/2); adjacent cells sit
at unit distance.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple


class HexCoord(NamedTuple):
    q: int
    r: int


# Fixed neighbor offset order; neighbors() must follow it.
N_OFFSETS: tuple[tuple[int, int], ...] = (
    (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1),
)

# Same offsets sorted by angle in the embedding (0, 60, ..., 300 degrees).
# Used to classify the bend of a move by direction-index difference.
ANGULAR_OFFSETS: tuple[tuple[int, int], ...] = (
    (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1),
)

_ANGULAR_INDEX = {d: i for i, d in enumerate(ANGULAR_OFFSETS)}

SQRT3 = math.sqrt(3.0)


def neighbors(c: HexCoord) -> list[HexCoord]:
    """The six neighbors of c, in the fixed N_OFFSETS order."""
    q, r = c
    return [HexCoord(q + dq, r + dr) for dq, dr in N_OFFSETS]


def adjacent(a: HexCoord, b: HexCoord) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in _ANGULAR_INDEX


def direction_index(a: HexCoord, b: HexCoord) -> int:
    """Angular index (0..5) of the step from a to its neighbor b."""
    return _ANGULAR_INDEX[(b[0] - a[0], b[1] - a[1])]


def position(c: HexCoord) -> tuple[float, float]:
    """Center of cell c in the plane embedding."""
    q, r = c
    return (q + r / 2.0, r * SQRT3 / 2.0)


def rotate60(c: HexCoord) -> HexCoord:
    """Rotate c by 60 degrees counterclockwise about the origin."""
    q, r = c
    return HexCoord(-r, q + r)


def reflect(c: HexCoord) -> HexCoord:
    """Mirror c across the line through the origin and (1, 1)'s midpoint axis.

    Swapping q and r is a lattice reflection in the embedding above.
    """
    return HexCoord(c[1], c[0])


def symmetries(cells: Iterable[HexCoord]) -> list[frozenset[HexCoord]]:
    """All 12 rotation/reflection images of a cell set (untranslated)."""
    images = []
    current = [HexCoord(q, r) for q, r in cells]
    for _ in range(6):
        images.append(frozenset(current))
        images.append(frozenset(reflect(c) for c in current))
        current = [rotate60(c) for c in current]
    return images


def normalize_translation(cells: frozenset[HexCoord]) -> frozenset[HexCoord]:
    """Translate the set so its minimum (q, r) becomes the origin."""
    qmin = min(c[0] for c in cells)
    rmin = min(c[1] for c in cells)
    return frozenset(HexCoord(q - qmin, r - rmin) for q, r in cells)


def canonical_form(cells: Iterable[HexCoord]) -> tuple[HexCoord, ...]:
    """Lexicographically smallest sorted coordinate tuple over the 12
    symmetries, after translation normalization.  Equal canonical forms mean
    congruent cell sets."""
    best = None
    for image in symmetries(cells):
        normalized = tuple(sorted(normalize_translation(image)))
        if best is None or normalized < best:
            best = normalized
    assert best is not None
    return best


def signed_area(points: list[tuple[float, float]]) -> float:
    """Shoelace signed area of a closed polygon (vertices in order)."""
    total = 0.0
    for i, (x1, y1) in enumerate(points):
        x2, y2 = points[(i + 1) % len(points)]
        total += x1 * y2 - x2 * y1
    return total / 2.0
