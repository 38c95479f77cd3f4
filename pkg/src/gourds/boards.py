"""Board generators and fixtures: standard small boards, seeded random proper
boards, and the two-lobe exchange benchmark family."""

from __future__ import annotations

import random

from .board import Board, is_star_of_david, make_board, validate_proper
from .hexgeom import HexCoord, canonical_form, neighbors
from .puzzle import Configuration, Gourd


def triangle_board() -> Board:
    return make_board([(0, 0), (1, 0), (0, 1)])


def flower_board() -> Board:
    return make_board([(0, 0)] + [tuple(c) for c in neighbors(HexCoord(0, 0))])


def hex_board(radius: int) -> Board:
    cells = [
        (q, r)
        for q in range(-radius, radius + 1)
        for r in range(-radius, radius + 1)
        if abs(q + r) <= radius
    ]
    return make_board(cells)


def annulus_board() -> Board:
    """Odd-size 2-connected board with a hole (validator fixture)."""
    cells = [(q, r) for (q, r) in
             ((q, r) for q in range(-2, 3) for r in range(-2, 3) if abs(q + r) <= 2)
             if (q, r) != (0, 0)]
    cells += [(3, 0), (3, -1), (4, -1)]
    return make_board(cells)


def strip_board(n: int) -> Board:
    """Two-row strip with 2n+1 cells: n+1 cells in row 0, n in row 1."""
    cells = [(i, 0) for i in range(n + 1)] + [(i, 1) for i in range(n)]
    return make_board(cells)


def exchange_strip_instance(n: int):
    """Benchmark family: n gourds on a 2n+1-cell strip, the left half red and
    the right half blue; the target exchanges the two halves.  Any solution
    needs a number of moves quadratic in n."""
    assert n % 2 == 0 and n >= 2
    from .hamilton import find_hamiltonian

    b = strip_board(n)
    h = find_hamiltonian(b)
    half = n // 2
    labels = [("c1", "c1")] * half + [("c2", "c2")] * half
    start = aligned_configuration(h, labels)
    target = aligned_configuration(h, labels[half:] + labels[:half])
    return b, start, target


def aligned_configuration(h, labels, empty_index: int = 0) -> Configuration:
    """Configuration with every gourd on an edge of h: gourd i covers cycle
    positions (empty_index + 2i + 1, empty_index + 2i + 2)."""
    order = h.order
    L = len(order)
    gourds = []
    for i, (la, lb) in enumerate(labels):
        a = order[(empty_index + 2 * i + 1) % L]
        bb = order[(empty_index + 2 * i + 2) % L]
        gourds.append(Gourd(a, bb, la, lb))
    assert 2 * len(gourds) + 1 == L
    return Configuration(tuple(gourds), order[empty_index % L])


def numbered_labels(n: int) -> list[tuple[str, str]]:
    return [(f"#{2 * i + 1}", f"#{2 * i + 2}") for i in range(n)]


def enumerate_proper_boards(max_cells: int) -> list[Board]:
    """All proper boards with at most max_cells cells, one per congruence
    class.  Grows connected cell sets level by level, deduplicating by
    canonical form, then filters with the properness validator."""
    level = {canonical_form([HexCoord(0, 0)])}
    out = []
    for size in range(2, max_cells + 1):
        grown = set()
        for shape in level:
            cells = set(shape)
            frontier = {d for c in cells for d in neighbors(c) if d not in cells}
            for f in frontier:
                grown.add(canonical_form(cells | {f}))
        level = grown
        if size % 2 == 1:
            for shape in sorted(level):
                b = make_board(shape)
                if validate_proper(b).proper:
                    out.append(b)
    return out


def random_proper_board(size: int, seed: int) -> Board:
    """Seeded random proper board with exactly `size` cells (odd, >= 3).

    Grows a compact random blob, then patches holes, articulation points and
    parity until the properness validator passes.
    """
    assert size % 2 == 1 and size >= 3
    rng = random.Random(seed)
    for _ in range(200):
        cells = {HexCoord(0, 0)}
        while len(cells) < size:
            frontier = {}
            for c in cells:
                for d in neighbors(c):
                    if d not in cells:
                        frontier[d] = frontier.get(d, 0) + 1
            cands = list(frontier.items())
            # bias toward cells touching more of the blob, for compactness
            weights = [cnt * cnt for _, cnt in cands]
            cell = rng.choices([c for c, _ in cands], weights=weights)[0]
            cells.add(cell)
        _fill_holes(cells)
        _fix_articulations(cells, rng)
        if len(cells) != size:
            continue
        b = make_board(cells)
        if is_star_of_david(b):
            continue
        if validate_proper(b).proper:
            return b
    raise AssertionError(f"random board generation failed for size={size} seed={seed}")


def _fill_holes(cells: set[HexCoord]) -> None:
    qs = [c.q for c in cells]
    rs = [c.r for c in cells]
    qlo, qhi = min(qs) - 1, max(qs) + 1
    rlo, rhi = min(rs) - 1, max(rs) + 1
    start = HexCoord(qlo, rlo)
    outside = {start}
    stack = [start]
    while stack:
        c = stack.pop()
        for d in neighbors(c):
            if qlo <= d.q <= qhi and rlo <= d.r <= rhi and d not in cells and d not in outside:
                outside.add(d)
                stack.append(d)
    for q in range(qlo, qhi + 1):
        for r in range(rlo, rhi + 1):
            c = HexCoord(q, r)
            if c not in cells and c not in outside:
                cells.add(c)


def _articulation_points(cells: set[HexCoord]) -> set[HexCoord]:
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(cells)
    for c in cells:
        for d in neighbors(c):
            if d in cells:
                g.add_edge(c, d)
    return set(nx.articulation_points(g))


def _fix_articulations(cells: set[HexCoord], rng: random.Random) -> None:
    for _ in range(100):
        arts = _articulation_points(cells)
        if not arts:
            return
        v = sorted(arts)[0]
        # add an outside cell adjacent to v and to another cell, widening the cut
        cands = [d for d in neighbors(v)
                 if d not in cells
                 and sum(1 for e in neighbors(d) if e in cells) >= 2]
        if not cands:
            cands = [d for c in cells for d in neighbors(c)
                     if d not in cells and sum(1 for e in neighbors(d) if e in cells) >= 2]
        cells.add(rng.choice(sorted(cands)) if len(cands) > 1 else cands[0])
        _fill_holes(cells)
    raise AssertionError("could not remove articulation points")


def _thicken(cells: set[HexCoord], rng: random.Random) -> None:
    cands = sorted(
        d for c in cells for d in neighbors(c)
        if d not in cells and sum(1 for e in neighbors(d) if e in cells) >= 2
    )
    cells.add(rng.choice(cands))
