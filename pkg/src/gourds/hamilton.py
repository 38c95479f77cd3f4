"""Hamiltonian cycles on board graphs, interior triangulation, the dual tree,
substructure detection, degree-3-run repair, and balanced splits.

Cycle orientation: every cycle is normalized so that traversal in index order
has negative shoelace signed area in the plane embedding; "counterclockwise"
always means increasing index along this normalized order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx
from shapely.geometry import Point, Polygon
from shapely.prepared import prep

from .board import Board, board_graph, make_board, validate_proper
from .errors import GuardError, ImproperBoardError
from .hexgeom import HexCoord, adjacent, neighbors, position, signed_area

HAMILTON_CELL_GUARD = 2000


@dataclass(frozen=True)
class HamiltonianCycle:
    order: tuple[HexCoord, ...]

    def __len__(self) -> int:
        return len(self.order)

    def edges(self) -> set[frozenset[HexCoord]]:
        out = set()
        for i, c in enumerate(self.order):
            out.add(frozenset((c, self.order[(i + 1) % len(self.order)])))
        return out

    def index(self) -> dict[HexCoord, int]:
        return {c: i for i, c in enumerate(self.order)}


def normalize_cycle(order) -> HamiltonianCycle:
    """Rotate to start at the smallest cell; orient to negative signed area."""
    order = list(order)
    if signed_area([position(c) for c in order]) > 0:
        order.reverse()
    k = order.index(min(order))
    return HamiltonianCycle(tuple(order[k:] + order[:k]))


def check_cycle(b: Board, h: HamiltonianCycle) -> None:
    assert set(h.order) == set(b.cells) and len(h.order) == len(b.cells)
    for i, c in enumerate(h.order):
        assert adjacent(c, h.order[(i + 1) % len(h.order)]), "cycle edge not adjacent"


# ---------------------------------------------------------------------------
# Hamiltonian cycle search

def _extend_heuristic(cells: frozenset[HexCoord], rng: random.Random):
    """Grow a cycle to cover all cells: absorb an outside vertex adjacent to
    both ends of a cycle edge when possible (most-constrained vertex first);
    otherwise re-route the cycle locally around a stuck vertex.  Returns a
    full cycle order or None on a dead end."""
    tris = list(unit_triangles(cells))
    if not tris:
        return None
    cycle = sorted(rng.choice(tris))
    in_cycle = set(cycle)
    while len(cycle) < len(cells):
        best = None
        for i, u in enumerate(cycle):
            v = cycle[(i + 1) % len(cycle)]
            for w in neighbors(u):
                if w in cells and w not in in_cycle and adjacent(w, v):
                    outside = sum(1 for d in neighbors(w) if d in cells and d not in in_cycle)
                    key = (outside, w.q, w.r, i)
                    if best is None or key < best[0]:
                        best = (key, i, w)
        if best is not None:
            _, i, w = best
            cycle.insert(i + 1, w)
            in_cycle.add(w)
            continue
        # no direct insertion: re-route locally around some frontier vertex
        frontier = sorted(
            (sum(1 for d in neighbors(w) if d in cells and d not in in_cycle), w)
            for w in
            {d for c in in_cycle for d in neighbors(c) if d in cells and d not in in_cycle}
        )
        edges = set()
        for i, u in enumerate(cycle):
            edges.add(frozenset((u, cycle[(i + 1) % len(cycle)])))
        adopted = None
        for _, w in frontier:
            scope = frozenset(in_cycle | {w})
            ring1 = {w} | {d for d in neighbors(w) if d in scope}
            ring2 = ring1 | {e for d in ring1 for e in neighbors(d) if e in scope}
            for region in (ring1, ring2):
                for order in _reroutes(scope, edges, set(region)):
                    adopted = order
                    break
                if adopted:
                    break
            if adopted:
                break
        if adopted is None:
            return None
        cycle = adopted
        in_cycle = set(cycle)
    return cycle


def _backtrack_cycle(cells: frozenset[HexCoord], budget: int = 2_000_000):
    """Exhaustive Hamiltonian cycle search with connectivity pruning."""
    order = sorted(cells)
    start = order[0]
    adj = {c: [d for d in neighbors(c) if d in cells] for c in cells}
    path = [start]
    used = {start}
    nodes = [0]

    def remaining_ok() -> bool:
        rest = cells - used
        if not rest:
            return True
        seed = next(iter(rest))
        seen = {seed}
        stack = [seed]
        while stack:
            c = stack.pop()
            for d in adj[c]:
                if d in rest and d not in seen:
                    seen.add(d)
                    stack.append(d)
        if len(seen) != len(rest):
            return False
        tip = path[-1]
        return any(d in rest for d in adj[tip])

    def rec() -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise GuardError("Hamiltonian backtracking budget exceeded")
        if len(path) == len(cells):
            return adjacent(path[-1], start)
        if not remaining_ok():
            return False
        tip = path[-1]
        cands = [d for d in adj[tip] if d not in used]
        cands.sort(key=lambda d: sum(1 for e in adj[d] if e not in used))
        for d in cands:
            path.append(d)
            used.add(d)
            if rec():
                return True
            path.pop()
            used.remove(d)
        return False

    if rec():
        return list(path)
    return None


def find_hamiltonian(b: Board) -> HamiltonianCycle:
    report = validate_proper(b)
    if not report.proper:
        raise ImproperBoardError(report)
    if len(b.cells) > HAMILTON_CELL_GUARD:
        raise GuardError(f"board exceeds {HAMILTON_CELL_GUARD} cells")
    if len(b.cells) == 3:
        return normalize_cycle(sorted(b.cells))
    if len(b.cells) <= 13:
        cycle = _backtrack_cycle(b.cells)
        assert cycle is not None
        h = normalize_cycle(cycle)
        check_cycle(b, h)
        return h
    for attempt in range(12):
        cycle = _extend_heuristic(b.cells, random.Random(attempt))
        if cycle is not None:
            h = normalize_cycle(cycle)
            check_cycle(b, h)
            return h
    cycle = _backtrack_cycle(b.cells)
    if cycle is None:
        raise GuardError("no Hamiltonian cycle found on a proper board")
    h = normalize_cycle(cycle)
    check_cycle(b, h)
    return h


# ---------------------------------------------------------------------------
# Triangulation and dual tree

def unit_triangles(cells) -> set[frozenset[HexCoord]]:
    """All unit lattice triangles with all three corners in `cells`."""
    cells = set(cells)
    out = set()
    for c in cells:
        up = (HexCoord(c.q + 1, c.r), HexCoord(c.q, c.r + 1))
        down = (HexCoord(c.q + 1, c.r), HexCoord(c.q + 1, c.r - 1))
        for pair in (up, down):
            if pair[0] in cells and pair[1] in cells:
                out.add(frozenset((c,) + pair))
    return out


@dataclass(frozen=True)
class Triangulation:
    triangles: frozenset[frozenset[HexCoord]]


def triangulate(b: Board, h: HamiltonianCycle) -> Triangulation:
    poly = Polygon([position(c) for c in h.order])
    prepared = prep(poly)
    chosen = []
    for tri in unit_triangles(set(h.order)):
        xs = [position(c) for c in tri]
        cx = sum(p[0] for p in xs) / 3.0
        cy = sum(p[1] for p in xs) / 3.0
        if prepared.contains(Point(cx, cy)):
            chosen.append(tri)
    return Triangulation(frozenset(chosen))


@dataclass(frozen=True)
class DualTree:
    tree: nx.Graph
    h: HamiltonianCycle

    def degree(self, tri) -> int:
        return self.tree.degree[tri]


def triangle_sides(tri) -> list[frozenset[HexCoord]]:
    a, b, c = sorted(tri)
    return [frozenset((a, b)), frozenset((a, c)), frozenset((b, c))]


def dual_tree(t: Triangulation, h: HamiltonianCycle) -> DualTree:
    g = nx.Graph()
    g.add_nodes_from(t.triangles)
    by_side: dict[frozenset[HexCoord], list] = {}
    for tri in t.triangles:
        for side in triangle_sides(tri):
            by_side.setdefault(side, []).append(tri)
    for side, tris in by_side.items():
        if len(tris) == 2:
            g.add_edge(tris[0], tris[1], side=side)
    return DualTree(g, h)


def deg3_runs(d: DualTree) -> list[list]:
    """Longest simple path of degree-3 nodes per induced component."""
    deg3 = [t for t in d.tree.nodes if d.tree.degree[t] == 3]
    sub = d.tree.subgraph(deg3)
    runs = []
    for comp in nx.connected_components(sub):
        comp_g = sub.subgraph(comp)
        start = next(iter(comp))
        far1 = max(nx.single_source_shortest_path(comp_g, start).items(), key=lambda kv: len(kv[1]))[0]
        paths = nx.single_source_shortest_path(comp_g, far1)
        far2, path = max(paths.items(), key=lambda kv: len(kv[1]))
        runs.append(path)
    runs.sort(key=len, reverse=True)
    return runs


# ---------------------------------------------------------------------------
# Substructures (Type I: leaf next to a degree-2 node; Type II: degree-3 node
# with two leaf neighbors)

@dataclass(frozen=True)
class Substructure:
    kind: str                      # "I" or "II"
    cycle_vertices: tuple[HexCoord, ...]
    anchor_first: bool             # Type I: True if vertices[0] carries both chords
    hprime: HamiltonianCycle | None


def _h_positions(h: HamiltonianCycle):
    return h.index()


def _consecutive(h: HamiltonianCycle, cells: list[HexCoord]) -> list[HexCoord] | None:
    """If `cells` occur consecutively on h (either direction), return them in
    h's forward order starting from the first; else None."""
    idx = h.index()
    L = len(h.order)
    k = len(cells)
    want = set(cells)
    for c in cells:
        i = idx[c]
        fwd = [h.order[(i + j) % L] for j in range(k)]
        if set(fwd) == want:
            return fwd
    return None


def find_substructure(d: DualTree, h: HamiltonianCycle) -> Substructure:
    tree = d.tree
    hedges = h.edges()
    # Type I first.
    for leaf in sorted(tree.nodes, key=sorted):
        if tree.degree[leaf] != 1:
            continue
        nb = next(iter(tree.neighbors(leaf)))
        if tree.degree[nb] != 2:
            continue
        shared = tree.edges[leaf, nb]["side"]
        (bcell,) = leaf - shared
        (dcell,) = nb - shared
        a_or_c = sorted(shared)
        # identify a (chord holder): a is adjacent to d via a side of nb on H? no:
        # H edge of nb is (c,d) where c is the shared-side vertex NOT chorded to d.
        for a, c in (a_or_c, a_or_c[::-1]):
            if frozenset((c, dcell)) in hedges and frozenset((a, bcell)) in hedges \
                    and frozenset((bcell, c)) in hedges:
                seq = _consecutive(h, [a, bcell, c, dcell])
                assert seq is not None
                anchor_first = seq[0] == a
                hp = [v for v in h.order if v not in (bcell, c)]
                hprime = normalize_cycle(hp)
                return Substructure("I", tuple(seq), anchor_first, hprime)
    # Type II.
    for t in sorted(tree.nodes, key=sorted):
        if tree.degree[t] != 3:
            continue
        leaves = [nb for nb in tree.neighbors(t) if tree.degree[nb] == 1]
        if len(leaves) < 2:
            continue
        l1, l2 = leaves[0], leaves[1]
        s1 = tree.edges[t, l1]["side"]
        s2 = tree.edges[t, l2]["side"]
        common = s1 & s2
        (ccell,) = common
        (acell,) = s1 - common
        (ecell,) = s2 - common
        (bcell,) = l1 - s1
        (dcell,) = l2 - s2
        seq = _consecutive(h, [acell, bcell, ccell, dcell, ecell])
        assert seq is not None
        return Substructure("II", tuple(seq), True, None)
    raise AssertionError("no substructure found; dual tree too small?")


# ---------------------------------------------------------------------------
# Degree-3 run repair via local rerouting

def _reroutes(cells_all: frozenset[HexCoord], hedges: set[frozenset[HexCoord]],
              region: set[HexCoord]):
    """Yield Hamiltonian cycle orders over cells_all that keep every edge of
    `hedges` not lying fully inside `region`; edges inside the region are
    re-chosen freely."""
    kept = [e for e in hedges if not e <= region]
    fixed_deg = {v: 0 for v in region}
    for e in kept:
        for v in e:
            if v in region:
                fixed_deg[v] += 1
    inner_edges = []
    region_list = sorted(region)
    for i, u in enumerate(region_list):
        for v in region_list[i + 1:]:
            if adjacent(u, v):
                inner_edges.append(frozenset((u, v)))
    need = {v: 2 - fixed_deg[v] for v in region}
    if any(k < 0 for k in need.values()):
        return
    chosen: list[frozenset[HexCoord]] = []

    def completes_cycle() -> list[HexCoord] | None:
        edge_set = kept + chosen
        adjmap: dict[HexCoord, list[HexCoord]] = {}
        for e in edge_set:
            u, v = tuple(e)
            adjmap.setdefault(u, []).append(v)
            adjmap.setdefault(v, []).append(u)
        if len(adjmap) != len(cells_all):
            return None
        start = next(iter(cells_all))
        prev, cur = None, start
        order = [start]
        while True:
            nxts = [w for w in adjmap[cur] if w != prev]
            if len(adjmap[cur]) != 2:
                return None
            nxt = nxts[0]
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        return order if len(order) == len(cells_all) else None

    # suffix[i][v] = number of edges in inner_edges[i:] incident to v
    suffix: list[dict] = [dict.fromkeys(region, 0)]
    for e in reversed(inner_edges):
        nxt = dict(suffix[0])
        for v in e:
            nxt[v] += 1
        suffix.insert(0, nxt)

    def rec(i: int, deficit: dict):
        if all(v == 0 for v in deficit.values()):
            order = completes_cycle()
            if order is not None:
                yield order
            return
        if i >= len(inner_edges):
            return
        avail = suffix[i]
        for v, k in deficit.items():
            if k > avail[v]:
                return
        e = inner_edges[i]
        u, v = tuple(e)
        if deficit[u] > 0 and deficit[v] > 0:
            deficit[u] -= 1
            deficit[v] -= 1
            chosen.append(e)
            yield from rec(i + 1, deficit)
            chosen.pop()
            deficit[u] += 1
            deficit[v] += 1
        yield from rec(i + 1, deficit)

    yield from rec(0, dict(need))


def _deg3_count(b: Board, h: HamiltonianCycle) -> int:
    d = dual_tree(triangulate(b, h), h)
    return sum(1 for t in d.tree.nodes if d.tree.degree[t] == 3)


def repair_seven_runs(b: Board, h: HamiltonianCycle) -> HamiltonianCycle:
    """Re-route h locally until its dual tree has no run of 7+ degree-3
    nodes.  Each accepted rewrite strictly decreases the number of degree-3
    nodes, so the loop terminates."""
    current = h
    while True:
        d = dual_tree(triangulate(b, current), current)
        runs = deg3_runs(d)
        if not runs or len(runs[0]) < 7:
            return current
        run = runs[0]
        best_count = sum(1 for t in d.tree.nodes if d.tree.degree[t] == 3)
        improved = None
        for width in (7, min(len(run), 9)):
            window = run[:width]
            region: set[HexCoord] = set()
            for tri in window:
                region |= set(tri)
                for nb in d.tree.neighbors(tri):
                    region |= set(nb)
            for order in _reroutes(frozenset(b.cells), current.edges(), region):
                cand = normalize_cycle(order)
                if _deg3_count(b, cand) < best_count:
                    improved = cand
                    break
            if improved is not None:
                break
        if improved is None:
            raise AssertionError("no improving reroute found for a 7-run")
        current = improved


# ---------------------------------------------------------------------------
# Balanced split

@dataclass(frozen=True)
class SplitResult:
    station: frozenset[HexCoord]              # triangle t
    e1: tuple[HexCoord, HexCoord]             # (x, y): y follows x on h
    v1: HexCoord                              # apex of t
    h1: HamiltonianCycle
    h2: HamiltonianCycle
    shared: str                               # "one" | "three"

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.h1.order), len(self.h2.order)


def _centroid(tree: nx.Graph):
    best = None
    n = tree.number_of_nodes()
    for node in tree.nodes:
        worst = 0
        seen = {node}
        for nb in tree.neighbors(node):
            stack = [nb]
            comp = 0
            local = {nb}
            while stack:
                x = stack.pop()
                comp += 1
                for y in tree.neighbors(x):
                    if y != node and y not in local:
                        local.add(y)
                        stack.append(y)
            worst = max(worst, comp)
        key = (worst, sorted(node))
        if best is None or key < best[0]:
            best = (key, node)
    return best[1]


def _subtree_size(tree: nx.Graph, root, banned) -> int:
    stack = [root]
    seen = {root, banned}
    count = 0
    while stack:
        x = stack.pop()
        count += 1
        for y in tree.neighbors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return count


def balanced_split(b: Board, h: HamiltonianCycle) -> SplitResult:
    d = dual_tree(triangulate(b, h), h)
    tree = d.tree
    if tree.number_of_nodes() < 2:
        raise GuardError("dual tree too small to split")
    node = _centroid(tree)
    prev = None
    for _ in range(8):
        if tree.degree[node] == 2:
            break
        nbs = [nb for nb in tree.neighbors(node) if nb != prev]
        nbs.sort(key=lambda nb: (-_subtree_size(tree, nb, node), sorted(nb)))
        prev, node = node, nbs[0]
    else:
        raise AssertionError("no degree-2 node within 7 steps of the centroid")
    return split_at(b, h, node)


def _h_sides(tri, h: HamiltonianCycle):
    hedges = h.edges()
    return [side for side in triangle_sides(tri) if side in hedges]


def split_at(b: Board, h: HamiltonianCycle, tri) -> SplitResult:
    sides = _h_sides(tri, h)
    if not sides:
        raise GuardError("split triangle has no cycle side")
    e1 = sorted(sides)[0]
    (v1,) = tri - e1
    idx = h.index()
    L = len(h.order)
    u, w = tuple(e1)
    # orient: y follows x along h
    if (idx[u] + 1) % L == idx[w]:
        x, y = u, w
    elif (idx[w] + 1) % L == idx[u]:
        x, y = w, u
    else:
        raise AssertionError("e1 is not a cycle edge")
    # path from y around to x
    path = [h.order[(idx[y] + j) % L] for j in range(L)]
    k = path.index(v1)
    seg1 = path[: k + 1]          # y .. v1
    seg2 = path[k:]               # v1 .. x
    if len(seg1) % 2 == 1 and len(seg2) % 2 == 1:
        h1o, h2o, shared = seg1, seg2, "one"
    else:
        h1o, h2o, shared = seg1 + [x], seg2 + [y], "three"
    h1 = normalize_cycle(h1o)
    h2 = normalize_cycle(h2o)
    for order in (h1, h2):
        for i, c in enumerate(order.order):
            assert adjacent(c, order.order[(i + 1) % len(order.order)])
    return SplitResult(frozenset(tri), (x, y), v1, h1, h2, shared)


def decomposition_dump(b: Board, h: HamiltonianCycle) -> str:
    t = triangulate(b, h)
    d = dual_tree(t, h)
    lines = ["cycle: " + " ".join(f"({c.q},{c.r})" for c in h.order)]
    lines.append(f"triangles: {len(t.triangles)}")
    for tri in sorted(t.triangles, key=sorted):
        lines.append("  t " + " ".join(f"({c.q},{c.r})" for c in sorted(tri)))
    lines.append(f"dual_edges: {d.tree.number_of_edges()}")
    hist: dict[int, int] = {}
    for node in d.tree.nodes:
        hist[d.tree.degree[node]] = hist.get(d.tree.degree[node], 0) + 1
    lines.append("degree_histogram: " + " ".join(f"{k}:{v}" for k, v in sorted(hist.items())))
    return "\n".join(lines) + "\n"
