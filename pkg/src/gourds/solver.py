"""Three-phase reconfiguration solver.

Phase 1 aligns every gourd with an edge of a Hamiltonian cycle H; phase 2
permutes the aligned ring (cubic station sorter, or divide-and-conquer over a
balanced cycle split); phase 3 is the inverted, reversed alignment of the
target.  All phases emit moves into a shared mutable packed state and are
verified by replay at the end.

Ring conventions: cycles are normalized (see `hamilton`); "ccw" means
increasing cycle index.  In an aligned state with the empty cell at index e,
gourd j of the ring occupies indices (e+1+2j, e+2+2j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .board import Board, make_board, validate_proper
from .errors import ColorMismatchError, GourdsError, ImproperBoardError
from .hamilton import (
    HamiltonianCycle,
    Substructure,
    balanced_split,
    dual_tree,
    find_hamiltonian,
    find_substructure,
    normalize_cycle,
    repair_seven_runs,
    triangulate,
)
from .hexgeom import HexCoord
from .puzzle import (
    Configuration,
    Gourd,
    Move,
    apply_move,
    invert_move,
    legal_moves,
    make_move,
    verify_sequence,
)
from .tables import BoardTables, pack_config

QUADRATIC_BASE_CELLS = 33

log = logging.getLogger(__name__)


class SolverBug(AssertionError):
    """Internal invariant violation; quadratic layers catch this and fall
    back to the cubic sorter."""


# ---------------------------------------------------------------------------
# Mutable packed state with a move log

class SolveState:
    def __init__(self, tables: BoardTables, occ, pos, empty):
        self.tables = tables
        self.occ = list(occ)
        self.pos = list(pos)
        self.empty = empty
        self.log: list[tuple[int, int, int, int]] = []

    def clone(self) -> "SolveState":
        c = SolveState(self.tables, self.occ, self.pos, self.empty)
        return c

    def mark(self) -> int:
        return len(self.log)

    def apply(self, tail: int, head: int, target: int) -> None:
        """Apply one primitive move given as cell ids (pivot rules)."""
        t = self.tables
        occ, pos = self.occ, self.pos
        if target != self.empty:
            raise SolverBug(f"target {target} is not the empty cell {self.empty}")
        e_head, e_tail = occ[head], occ[tail]
        if e_head < 0 or e_tail < 0 or (e_head ^ e_tail) != 1:
            raise SolverBug("tail/head do not hold one gourd")
        d1 = t.dir_between(tail, head)
        d2 = t.dir_between(head, target)
        if d1 < 0 or d2 < 0:
            raise SolverBug("move cells not adjacent")
        delta = (d2 - d1) % 6
        if delta == 3:
            raise SolverBug("degenerate move")
        if delta in (2, 4):
            occ[target] = e_head
            pos[e_head] = target
            occ[head] = -1
            self.empty = head
        else:
            occ[target] = e_head
            pos[e_head] = target
            occ[head] = e_tail
            pos[e_tail] = head
            occ[tail] = -1
            self.empty = tail
        self.log.append((tail, head, target, 0))

    def shift_gourd(self, tail: int, head: int, target: int) -> None:
        """Move the gourd on (tail, head) so it ends on (head, target): a
        single slide/turn when the bend allows, else two pivots."""
        t = self.tables
        d1 = t.dir_between(tail, head)
        d2 = t.dir_between(head, target)
        if d1 < 0 or d2 < 0:
            raise SolverBug("shift cells not adjacent")
        delta = (d2 - d1) % 6
        if delta in (0, 1, 5):
            self.apply(tail, head, target)
        elif delta in (2, 4):
            # triangle: emulate the both-end shift by two pivots
            self.apply(tail, head, target)        # gourd on (tail, target)
            self.apply(target, tail, head)        # gourd on (target, head)
        else:
            raise SolverBug("degenerate shift")

    def moves(self, start: int = 0) -> list[Move]:
        cells = self.tables.cells
        out = []
        for tail, head, target, _ in self.log[start:]:
            out.append(make_move(cells[tail], cells[head], cells[target]))
        return out


# ---------------------------------------------------------------------------
# Cycle context and aligned-state primitives

class CycleContext:
    def __init__(self, tables: BoardTables, h: HamiltonianCycle):
        self.tables = tables
        self.h = h
        self.cyc = [tables.index[c] for c in h.order]
        self.pos_of = {cid: i for i, cid in enumerate(self.cyc)}
        self.L = len(self.cyc)
        self.n = (self.L - 1) // 2

    def at(self, i: int) -> int:
        return self.cyc[i % self.L]

    def eidx(self, state: SolveState) -> int:
        idx = self.pos_of.get(state.empty)
        if idx is None:
            raise SolverBug("empty cell outside cycle")
        return idx

    def contains(self, cell: int) -> bool:
        return cell in self.pos_of


def advance(state: SolveState, ctx: CycleContext, direction: int) -> None:
    """One E step along the cycle: direction +1 moves E two indices ccw by
    advancing the gourd at (e+1, e+2) onto (e, e+1); -1 is the mirror."""
    e = ctx.eidx(state)
    if direction == 1:
        state.shift_gourd(ctx.at(e + 2), ctx.at(e + 1), ctx.at(e))
    else:
        state.shift_gourd(ctx.at(e - 2), ctx.at(e - 1), ctx.at(e))


def is_aligned(state: SolveState, ctx: CycleContext) -> bool:
    e = ctx.eidx(state)
    occ = state.occ
    for j in range(ctx.n):
        ea = occ[ctx.at(e + 1 + 2 * j)]
        eb = occ[ctx.at(e + 2 + 2 * j)]
        if ea < 0 or eb != (ea ^ 1):
            return False
    return True


def ring_of(state: SolveState, ctx: CycleContext) -> list[tuple[int, int]]:
    """Aligned ring read ccw from E: (gourd id, orientation bit) per slot;
    orientation 0 means the even end sits on the lower cycle index."""
    e = ctx.eidx(state)
    occ = state.occ
    out = []
    for j in range(ctx.n):
        ea = occ[ctx.at(e + 1 + 2 * j)]
        eb = occ[ctx.at(e + 2 + 2 * j)]
        if ea < 0 or eb != (ea ^ 1):
            raise SolverBug("state is not aligned")
        out.append((ea >> 1, ea & 1))
    return out


def float_steps(state: SolveState, ctx: CycleContext, k: int, direction: int) -> None:
    for _ in range(k):
        advance(state, ctx, direction)


def float_to_cell(state: SolveState, ctx: CycleContext, target_idx: int,
                  direction: int | None = None) -> None:
    """Float E (gap-wise advances) until it sits on cycle index target_idx."""
    L = ctx.L
    inv2 = (L + 1) // 2
    e = ctx.eidx(state)
    k_ccw = ((target_idx - e) * inv2) % L
    k_cw = ((e - target_idx) * inv2) % L
    if direction == 1 or (direction is None and k_ccw <= k_cw):
        float_steps(state, ctx, k_ccw, 1)
    else:
        float_steps(state, ctx, k_cw, -1)
    if ctx.eidx(state) != target_idx % L:
        raise SolverBug("float missed its target")


def rotate_units(state: SolveState, ctx: CycleContext, t: int) -> None:
    """Rigid rotation: every gourd and E shift by t cycle indices."""
    if t == 0:
        return
    direction = -1 if t > 0 else 1
    for _ in range(abs(t)):
        for _ in range(ctx.n):
            advance(state, ctx, direction)


def rotate_to_abs(state: SolveState, ctx: CycleContext, target_idx: int) -> None:
    """Rigid rotation putting E on cycle index target_idx (ring reading
    relative to E is unchanged)."""
    e = ctx.eidx(state)
    t = (target_idx - e) % ctx.L
    if t > ctx.L // 2:
        t -= ctx.L
    rotate_units(state, ctx, t)


def float_to_gap(state: SolveState, ctx: CycleContext, slot: int) -> None:
    """Float E so that the ring element currently at slot `slot` becomes
    slot 0 (the first gourd ccw of E)."""
    n = ctx.n
    slot %= n
    if slot <= n - slot:
        float_steps(state, ctx, slot, 1)
    else:
        float_steps(state, ctx, n - slot, -1)


# ---------------------------------------------------------------------------
# Phase 1: alignment

def align_state(state: SolveState, ctx: CycleContext) -> None:
    """Align all gourds with cycle edges: inspect the cell ccw of E; an
    unaligned gourd half there is folded onto the two cells ending at E, an
    aligned gourd is advanced."""
    guard = 8 * ctx.L * ctx.L + 64
    while not is_aligned(state, ctx):
        guard -= 1
        if guard < 0:
            raise SolverBug("alignment did not converge")
        e = ctx.eidx(state)
        nu = ctx.at(e + 1)
        end = state.occ[nu]
        if end < 0:
            raise SolverBug("two empty cells?")
        partner = state.pos[end ^ 1]
        if partner == ctx.at(e + 2):
            advance(state, ctx, 1)
        else:
            state.shift_gourd(partner, nu, ctx.at(e))


# ---------------------------------------------------------------------------
# Stations: constant-size swap/flip machinery on a substructure

def _script_on_subboard(tables: BoardTables, cells: list[int], start_ends: dict[int, int],
                        accept) -> list[tuple[int, int, int]]:
    """BFS over configurations of the cells in `cells` (ends given as
    cell->end id map; exactly one cell empty), using pivot rules restricted to
    the sub-board.  Returns the move list (cell ids) reaching a state for
    which accept(cell_of_end: dict end->cell) is true."""
    sub = make_board([tables.cells[c] for c in cells])
    idx_map = {tables.cells[c]: c for c in cells}
    ends = sorted(start_ends.values())
    gids = sorted({e >> 1 for e in ends})
    gourds = []
    cell_of = {e: c for c, e in start_ends.items()}
    for g in gids:
        a = tables.cells[cell_of[2 * g]]
        bb = tables.cells[cell_of[2 * g + 1]]
        gourds.append(Gourd(a, bb, f"#{2 * g + 1}", f"#{2 * g + 2}"))
    (empty_cell,) = set(cells) - set(start_ends)
    start = Configuration(tuple(gourds), tables.cells[empty_cell])

    def key(conf: Configuration):
        return tuple((g.end_a, g.end_b) for g in conf.gourds) + (conf.empty,)

    def conf_map(conf: Configuration) -> dict[int, int]:
        out = {}
        for gi, g in zip(gids, conf.gourds):
            out[2 * gi] = idx_map[g.end_a]
            out[2 * gi + 1] = idx_map[g.end_b]
        return out

    from collections import deque

    seen = {key(start)}
    queue = deque([(start, [])])
    while queue:
        conf, path = queue.popleft()
        if accept(conf_map(conf)):
            return [(idx_map[m.tail], idx_map[m.head], idx_map[m.target]) for m in path]
        for m in legal_moves(sub, conf):
            nxt = apply_move(conf, m)
            k = key(nxt)
            if k not in seen:
                seen.add(k)
                queue.append((nxt, path + [m]))
    raise SolverBug("no station script found")


class TypeIStation:
    """Four consecutive cycle cells a,b,c,d with chords a-c and a-d.  With E
    on a and a gourd parked on (b, c), the pair of gourds adjacent to E's gap
    can be transposed by walking the other one across the chord a-d, and the
    parked gourd can be reversed inside the triangle a,b,c."""

    swap_slots = "gap"          # transposes (last, first) ring elements

    def __init__(self, ctx: CycleContext, sub: Substructure):
        self.ctx = ctx
        idx = {c: i for i, c in enumerate(ctx.h.order)}
        seq = [idx[v] for v in sub.cycle_vertices]
        if sub.anchor_first:
            self.ja = seq[0]
            self.sigma = 1
        else:
            self.ja = seq[3]
            self.sigma = -1
        # sanity: b, c, d follow a in direction sigma
        for off, want in ((1, 1), (2, 2), (3, 3)):
            if (self.ja + self.sigma * off) % ctx.L != seq[off if sub.anchor_first else 3 - off]:
                raise SolverBug("substructure does not sit on the cycle as expected")

    @property
    def e_index(self) -> int:
        return self.ja

    @property
    def flip_slot(self) -> int:
        return 0 if self.sigma == 1 else self.ctx.n - 1

    def swap(self, state: SolveState) -> None:
        ctx, ja, s = self.ctx, self.ja, self.sigma
        if ctx.eidx(state) != ja:
            raise SolverBug("station swap requires E on cell a")
        at = ctx.at
        state.shift_gourd(at(ja - 2 * s), at(ja - s), at(ja))
        while state.empty != at(ja + 3 * s):
            e = ctx.eidx(state)
            state.shift_gourd(at(e - 2 * s), at(e - s), at(e))
        state.shift_gourd(at(ja - s), at(ja), at(ja + 3 * s))
        while state.empty != at(ja + 4 * s):
            e = ctx.eidx(state)
            state.shift_gourd(at(e - 2 * s), at(e - s), at(e))
        state.shift_gourd(at(ja), at(ja + 3 * s), at(ja + 4 * s))
        if state.empty != at(ja):
            raise SolverBug("station swap did not return E")

    def flip(self, state: SolveState, slot: int) -> None:
        ctx, ja, s = self.ctx, self.ja, self.sigma
        if slot != self.flip_slot or ctx.eidx(state) != ja:
            raise SolverBug("station flip precondition")
        a, b, c = ctx.at(ja), ctx.at(ja + s), ctx.at(ja + 2 * s)
        state.apply(c, b, a)
        state.apply(a, c, b)
        state.apply(b, a, c)
        if state.empty != a:
            raise SolverBug("station flip did not return E")


class TypeIIStation:
    """Five consecutive cycle cells a..e around a degree-3 triangle with two
    leaf triangles: with E on cell e, the two gourds on (a,b) and (c,d) can be
    swapped or reversed by a constant-length script found by local search."""

    swap_slots = "tail"         # transposes ring elements (n-2, n-1)

    def __init__(self, ctx: CycleContext, sub: Substructure):
        self.ctx = ctx
        idx = {c: i for i, c in enumerate(ctx.h.order)}
        seq = [idx[v] for v in sub.cycle_vertices]
        self.ja = seq[0]
        for off in range(1, 5):
            if (self.ja + off) % ctx.L != seq[off]:
                raise SolverBug("substructure does not sit on the cycle as expected")
        self.cells = [ctx.at(self.ja + off) for off in range(5)]

    @property
    def e_index(self) -> int:
        return (self.ja + 4) % self.ctx.L

    def _run(self, state: SolveState, accept_builder) -> None:
        ctx = self.ctx
        if ctx.eidx(state) != self.e_index:
            raise SolverBug("station requires E on cell e")
        a, b, c, d, e = self.cells
        start_ends = {cc: state.occ[cc] for cc in (a, b, c, d)}
        if min(start_ends.values()) < 0:
            raise SolverBug("station cells not fully covered")
        script = _script_on_subboard(state.tables, [a, b, c, d, e], start_ends,
                                     accept_builder(start_ends))
        for tail, head, target in script:
            state.apply(tail, head, target)
        if state.empty != e:
            raise SolverBug("station script did not return E")

    def swap(self, state: SolveState) -> None:
        a, b, c, d, e = self.cells
        occ = state.occ
        p, q = occ[a] >> 1, occ[c] >> 1

        def accept_builder(_):
            def accept(cell_of_end):
                return (
                    {cell_of_end[2 * q], cell_of_end[2 * q + 1]} == {a, b}
                    and {cell_of_end[2 * p], cell_of_end[2 * p + 1]} == {c, d}
                )
            return accept

        self._run(state, accept_builder)

    def flip(self, state: SolveState, slot: int) -> None:
        a, b, c, d, e = self.cells
        n = self.ctx.n
        if slot == n - 2:
            flip_cells, keep_cells = (a, b), (c, d)
        elif slot == n - 1:
            flip_cells, keep_cells = (c, d), (a, b)
        else:
            raise SolverBug("station cannot flip that slot")
        occ = state.occ
        fe = occ[flip_cells[0]]
        ke = occ[keep_cells[0]]

        def accept_builder(_):
            def accept(cell_of_end):
                return (
                    cell_of_end[fe] == flip_cells[1]
                    and cell_of_end[fe ^ 1] == flip_cells[0]
                    and cell_of_end[ke] == keep_cells[0]
                    and cell_of_end[ke ^ 1] == keep_cells[1]
                )
            return accept

        self._run(state, accept_builder)


def build_station(ctx: CycleContext):
    b = make_board(list(ctx.h.order))
    d = dual_tree(triangulate(b, ctx.h), ctx.h)
    sub = find_substructure(d, ctx.h)
    if sub.kind == "I":
        return TypeIStation(ctx, sub)
    return TypeIIStation(ctx, sub)


# ---------------------------------------------------------------------------
# Cubic ring sorter

def _ring_ids(state, ctx):
    return [g for g, _ in ring_of(state, ctx)]


def _swap_ring_neighbors(state: SolveState, ctx: CycleContext, station, slot: int) -> None:
    """Transpose ring elements (slot, slot+1 mod n) using the station."""
    n = ctx.n
    if station.swap_slots == "gap":
        # bring element slot+1 to ring slot 0
        float_to_gap(state, ctx, (slot + 1) % n)
    else:
        # bring element slot to ring slot n-2
        float_to_gap(state, ctx, (slot - (n - 2)) % n)
    rotate_to_abs(state, ctx, station.e_index)
    station.swap(state)


def _flip_ring_slot(state: SolveState, ctx: CycleContext, station, gid: int) -> None:
    ids = _ring_ids(state, ctx)
    pos = ids.index(gid)
    target_slot = station.flip_slot if station.swap_slots == "gap" else None
    if station.swap_slots == "gap":
        float_to_gap(state, ctx, (pos - target_slot) % ctx.n)
        rotate_to_abs(state, ctx, station.e_index)
        station.flip(state, target_slot)
    else:
        # use slot n-1
        float_to_gap(state, ctx, (pos - (ctx.n - 1)) % ctx.n)
        rotate_to_abs(state, ctx, station.e_index)
        station.flip(state, ctx.n - 1)


def _triangle_sort(state: SolveState, ctx: CycleContext, target_pos, target_empty) -> None:
    """n = 1 base case: all six positions reachable by pivots."""
    (gid,) = {g for g, _ in ring_of(state, ctx)}
    e0, e1 = 2 * gid, 2 * gid + 1
    want = {e0: target_pos[e0], e1: target_pos[e1]}

    def accept(cell_of_end):
        return cell_of_end[e0] == want[e0] and cell_of_end[e1] == want[e1]

    cells = list(ctx.cyc)
    start_ends = {state.pos[e0]: e0, state.pos[e1]: e1}
    script = _script_on_subboard(state.tables, cells, start_ends, accept)
    for tail, head, target in script:
        state.apply(tail, head, target)


def core_sort(state: SolveState, ctx: CycleContext, target_pos: list[int],
              target_empty: int, station=None) -> None:
    """Sort an aligned state to the aligned target (same cycle): bubble the
    ring's cyclic order with station swaps, fix orientations with station
    flips, then float and rotate to the exact cells."""
    n = ctx.n
    if n == 0:
        if state.empty != target_empty:
            raise SolverBug("empty mismatch on trivial cycle")
        return
    if not is_aligned(state, ctx):
        raise SolverBug("core_sort requires an aligned state")
    if n == 1:
        _triangle_sort(state, ctx, target_pos, target_empty)
        return

    # target ring read from the packed target
    t_eidx = ctx.pos_of[target_empty]
    t_occ = {}
    ring_gids = {g for g, _ in ring_of(state, ctx)}
    for g in ring_gids:
        t_occ[target_pos[2 * g]] = 2 * g
        t_occ[target_pos[2 * g + 1]] = 2 * g + 1
    t_ring = []
    for j in range(n):
        pa = ctx.at(t_eidx + 1 + 2 * j)
        pb = ctx.at(t_eidx + 2 + 2 * j)
        ea = t_occ.get(pa, -1)
        if ea < 0 or t_occ.get(pb, -2) != (ea ^ 1):
            raise SolverBug("target is not aligned on this cycle")
        t_ring.append((ea >> 1, ea & 1))
    t_ids = [g for g, _ in t_ring]

    if station is None:
        station = build_station(ctx)

    # 1. cyclic order: bubble toward the target order anchored at t_ids[0]
    anchor = t_ids[0]
    for _ in range(n * n + 4):
        ids = _ring_ids(state, ctx)
        a_at = ids.index(anchor)
        cur = ids[a_at:] + ids[:a_at]
        if cur == t_ids:
            break
        i = next(k for k in range(n) if cur[k] != t_ids[k])
        j = cur.index(t_ids[i])
        # bubble the wanted gourd one step toward position i
        _swap_ring_neighbors(state, ctx, station, (a_at + j - 1) % n)
    else:
        raise SolverBug("ring order sort did not converge")

    # 2. orientations
    t_orient = {g: o for g, o in t_ring}
    for _ in range(n + 2):
        wrong = [g for g, o in ring_of(state, ctx) if o != t_orient[g]]
        if not wrong:
            break
        _flip_ring_slot(state, ctx, station, wrong[0])
    else:
        raise SolverBug("orientation pass did not converge")

    # 3. E gap: float so the ring reading matches the target reading
    ids = _ring_ids(state, ctx)
    shift = ids.index(t_ids[0])
    float_to_gap(state, ctx, shift)

    # 4. absolute rotation
    rotate_to_abs(state, ctx, t_eidx)

    for g in ring_gids:
        if state.pos[2 * g] != target_pos[2 * g] or state.pos[2 * g + 1] != target_pos[2 * g + 1]:
            raise SolverBug("core sort failed to reach the target")
    if state.empty != target_empty:
        raise SolverBug("core sort failed to place E")


# ---------------------------------------------------------------------------
# Divide and conquer

def _replay_inverted(state: SolveState, log: list[tuple[int, int, int, int]]) -> None:
    """Append the inverse of a recorded move list (applied in reverse)."""
    t = state.tables
    for tail, head, target, _ in reversed(log):
        d1 = t.dir_between(tail, head)
        d2 = t.dir_between(head, target)
        if (d2 - d1) % 6 in (2, 4):
            state.apply(tail, target, head)
        else:
            state.apply(target, head, tail)


def _scratch_from_target(state: SolveState, scope: set[int], tpos, tempty) -> SolveState:
    occ = [-1] * state.tables.size
    pos = list(state.pos)
    for g in scope:
        for e in (2 * g, 2 * g + 1):
            pos[e] = tpos[e]
            occ[tpos[e]] = e
    return SolveState(state.tables, occ, pos, tempty)


def _pin_slot(ctx: CycleContext, pc1: int, pc2: int) -> int:
    """Cycle index p such that (p, p+1) are the pin cells, p holding pc1 or
    pc2 as the ring order dictates."""
    i1, i2 = ctx.pos_of[pc1], ctx.pos_of[pc2]
    if (i1 + 1) % ctx.L == i2:
        return i1
    if (i2 + 1) % ctx.L == i1:
        return i2
    raise SolverBug("pin cells not consecutive on the cycle")


def park_pinned(state: SolveState, ctx: CycleContext, gid: int,
                pc1: int, pc2: int, cv: int) -> None:
    """Within ctx's ring, move gourd gid onto the consecutive cells
    (pc1, pc2) and return E to cell cv, preserving cyclic order.  Requires
    the even-offset condition between the pin and cv (checked)."""
    ring = ring_of(state, ctx)
    posg = next(i for i, (g, _) in enumerate(ring) if g == gid)
    float_to_gap(state, ctx, (posg + 1) % ctx.n)
    e = ctx.eidx(state)
    p = _pin_slot(ctx, pc1, pc2)
    trot = (p + 2 - e) % ctx.L
    if trot > ctx.L // 2:
        trot -= ctx.L
    rotate_units(state, ctx, trot)
    off = (ctx.pos_of[cv] - p) % ctx.L
    if off % 2 != 0 or off < 2:
        raise SolverBug("pin/empty parity violated")
    float_steps(state, ctx, (off - 2) // 2, 1)
    if state.empty != cv:
        raise SolverBug("park did not return E")
    if {state.pos[2 * gid], state.pos[2 * gid + 1]} != {pc1, pc2}:
        raise SolverBug("park did not pin the gourd")


def _bridge_slot(ctx: CycleContext, cv: int, cx: int, cy: int) -> int:
    """Ring slot (pairing from E at cv) that covers cells {cx, cy}."""
    iv = ctx.pos_of[cv]
    for j in range(ctx.n):
        if {ctx.at(iv + 1 + 2 * j), ctx.at(iv + 2 + 2 * j)} == {cx, cy}:
            return j
    raise SolverBug("shared edge is not a pair slot from the shared vertex")


def _float_distance(ctx: CycleContext, frm: int, to: int) -> int:
    d = (frm - to) % ctx.n
    return min(d, ctx.n - d)


def _dance_three(state, ctx, ctx1, ctx2, cv, cx, cy, side_t, second, bf):
    """Transfer gourds between the subcycles of a three-shared-cell split
    until each sits on its target side.  The pair slot on the shared edge
    (x, y) acts as a buffer readable from both subrings; parking a gourd
    there from one side simultaneously absorbs the previous buffer gourd
    into the other side."""
    float_to_cell(state, ctx, ctx.pos_of[cv])
    slot1 = _bridge_slot(ctx1, cv, cx, cy)
    slot2 = _bridge_slot(ctx2, cv, cx, cy)
    n = ctx.n
    for _ in range(2 * n + 16):
        ring1 = ring_of(state, ctx1)
        ring2 = ring_of(state, ctx2)
        if ring1[slot1][0] != ring2[slot2][0]:
            raise SolverBug("subring buffer slots disagree")
        bridge = ring1[slot1][0]
        int1 = [g for i, (g, _) in enumerate(ring1) if i != slot1]
        int2 = [g for i, (g, _) in enumerate(ring2) if i != slot2]
        cand1 = [g for g in int1 if side_t[g] == 2]
        cand2 = [g for g in int2 if side_t[g] == 1]
        ok_bridge = (bridge == bf) if bf is not None else (side_t[bridge] == second)
        if not cand1 and not cand2 and ok_bridge:
            return bridge
        s = side_t[bridge]
        if s == 1:
            cands, ring, ctxk, slotk = cand1, ring1, ctx1, slot1
        else:
            cands, ring, ctxk, slotk = cand2, ring2, ctx2, slot2
        if cands:
            order = {g: i for i, (g, _) in enumerate(ring)}
            gid = min(cands, key=lambda g: (_float_distance(ctxk, order[g], slotk), g))
        elif bf is not None and bridge != bf and not cand1 and not cand2:
            gid = bf
            if gid not in (int1 if s == 1 else int2):
                raise SolverBug("buffer target gourd on the wrong side")
        else:
            raise SolverBug("transfer dance is stuck")
        posg = next(i for i, (g, _) in enumerate(ring) if g == gid)
        float_to_gap(state, ctxk, (posg - slotk) % ctxk.n)
        rotate_to_abs(state, ctxk, ctxk.pos_of[cv])
    raise SolverBug("transfer dance did not converge")


def _find_extension(state, ctx1, ctx2, cv):
    """One-shared-vertex split: find a host-cycle edge (r, s) and an
    other-cycle edge (c1, c2) with r~c1, s~c2 satisfying the three parity
    conditions that let gourds be exchanged through the (c1, c2) slot with
    E returning to the shared vertex."""
    t = state.tables
    for host, other in ((ctx1, ctx2), (ctx2, ctx1)):
        ivh = host.pos_of[cv]
        ivo = other.pos_of[cv]
        for i in range(host.L):
            r, s = host.at(i), host.at(i + 1)
            if ((i - ivh) % host.L) % 2 != 0:
                continue                      # P3: (r, s) must stay gourd-free
            for j in range(other.L):
                for c1, c2 in ((other.at(j), other.at(j + 1)),
                               (other.at(j + 1), other.at(j))):
                    if cv in (c1, c2):
                        continue
                    if t.dir_between(r, c1) < 0 or t.dir_between(s, c2) < 0:
                        continue
                    p = _pin_slot(other, c1, c2)
                    if ((other.pos_of[cv] - p) % other.L) % 2 != 0:
                        continue              # P1
                    # extended ring: host order with c1, c2 spliced after r
                    horder = [host.at(i + 1 + k) for k in range(host.L)]  # s .. r
                    ext_cells = [t.cells[c] for c in horder] + [t.cells[c1], t.cells[c2]]
                    ext = CycleContext(t, HamiltonianCycle(tuple(ext_cells)))
                    pe = _pin_slot(ext, c1, c2)
                    if ((ext.pos_of[cv] - pe) % ext.L) % 2 != 0:
                        continue              # P2
                    return host, other, ext, c1, c2
    return None


def _dance_one(state, ctx, ctx1, ctx2, cv, side_t):
    """Exchange mismatched gourds pairwise across a one-shared-vertex split
    using an extension of one subcycle as the transfer slot."""
    float_to_cell(state, ctx, ctx.pos_of[cv])
    ring1 = ring_of(state, ctx1)
    ring2 = ring_of(state, ctx2)
    mm1 = [g for g, _ in ring1 if side_t[g] == 2]
    mm2 = [g for g, _ in ring2 if side_t[g] == 1]
    if len(mm1) != len(mm2):
        raise SolverBug("unbalanced exchange across a one-shared split")
    if not mm1:
        return
    found = _find_extension(state, ctx1, ctx2, cv)
    if found is None:
        raise SolverBug("no transfer extension with compatible parity")
    host, other, ext, c1, c2 = found
    host_is_1 = host is ctx1
    for _ in range(len(mm1)):
        rh = ring_of(state, host)
        ro = ring_of(state, other)
        outs = [g for g, _ in rh if side_t[g] == (2 if host_is_1 else 1)]
        ins = [g for g, _ in ro if side_t[g] == (1 if host_is_1 else 2)]
        if not outs or not ins:
            raise SolverBug("exchange lists drained unevenly")
        p = _pin_slot(other, c1, c2)
        order_o = {g: i for i, (g, _) in enumerate(ro)}
        g_in = min(ins, key=lambda g: (order_o[g], g))
        park_pinned(state, other, g_in, c1, c2, cv)
        g_out = outs[0]
        park_pinned(state, ext, g_out, c1, c2, cv)
    rh = ring_of(state, host)
    ro = ring_of(state, other)
    if any(side_t[g] == (2 if host_is_1 else 1) for g, _ in rh) or \
       any(side_t[g] == (1 if host_is_1 else 2) for g, _ in ro):
        raise SolverBug("exchange incomplete")


def _dnc(state: SolveState, ctx: CycleContext, tpos, tempty: int, depth: int = 0) -> None:
    """Sort an aligned state to an aligned target on ctx's cycle, dividing at
    a balanced split; any failed invariant falls back to the cubic sorter for
    the current (sub)cycle."""
    if ctx.L <= QUADRATIC_BASE_CELLS or depth >= 60:
        core_sort(state, ctx, tpos, tempty)
        return
    try:
        _dnc_step(state, ctx, tpos, tempty, depth)
    except (SolverBug, AssertionError, GourdsError) as exc:
        log.debug("split sort fell back to cubic on %d cells: %s", ctx.L, exc)
        align_state(state, ctx)
        core_sort(state, ctx, tpos, tempty)


def _assign_sides(scope, tpos, tempty, cells1, cells2, shared, kind):
    """Assign each gourd's target to one side of a split and pick the side
    sorted second.  Both target cells must lie on one subcycle; the shared
    cells may only be covered by the second side (or by the one gourd lying
    entirely on shared cells, which rides the buffer); the target empty must
    be a second-side cell.  Returns (side_t, bf, second) or None."""
    side_t: dict[int, int] = {}
    bf = None
    owners = set()
    for g in scope:
        ca, cb = tpos[2 * g], tpos[2 * g + 1]
        in1 = ca in cells1 and cb in cells1
        in2 = ca in cells2 and cb in cells2
        if in1 and in2:
            if bf is not None or kind == "one":
                return None
            bf = g
            continue
        if in1:
            side_t[g] = 1
        elif in2:
            side_t[g] = 2
        else:
            return None
        if ca in shared or cb in shared:
            owners.add(side_t[g])
    for second in (2, 1) if tempty in cells2 else (1, 2):
        if owners <= {second} and tempty in (cells2 if second == 2 else cells1):
            if bf is not None:
                side_t[bf] = second
            return side_t, bf, second
    return None


def _dnc_step(state: SolveState, ctx: CycleContext, tpos, tempty: int, depth: int) -> None:
    t = state.tables
    bsub = make_board(list(ctx.h.order))
    scope = {g for g, _ in ring_of(state, ctx)}
    try:
        split = balanced_split(bsub, ctx.h)
    except AssertionError:
        # a long degree-3 run blocks the split: repair the cycle, realign
        # both the state and the target to it, and retry
        h2 = repair_seven_runs(bsub, ctx.h)
        ctx2 = CycleContext(t, h2)
        align_state(state, ctx2)
        scratch = _scratch_from_target(state, scope, tpos, tempty)
        align_state(scratch, ctx2)
        tpos2 = {e: scratch.pos[e] for g in scope for e in (2 * g, 2 * g + 1)}
        _dnc(state, ctx2, tpos2, scratch.empty, depth)
        _replay_inverted(state, scratch.log)
        return

    cx, cy = t.index[split.e1[0]], t.index[split.e1[1]]
    cv = t.index[split.v1]
    ctx1 = CycleContext(t, split.h1)
    ctx2 = CycleContext(t, split.h2)
    cells1, cells2 = set(ctx1.cyc), set(ctx2.cyc)

    tpos_orig, tempty_orig = tpos, tempty
    shared = {cx, cy, cv} if split.shared == "three" else {cv}
    rot = 0
    assign = None
    # The target may cover the shared cells from both sides (or straddle the
    # split boundary), which no phase order can sort.  Rigidly rotating the
    # target shifts its coverage pattern; solve to the first consistent
    # rotation and undo it at the end.
    for k in (0, 1, -1, 2, -2, 3, -3):
        if k == 0:
            tp_k, te_k = tpos, tempty
        else:
            scratch = _scratch_from_target(state, scope, tpos_orig, tempty_orig)
            rotate_units(scratch, ctx, k)
            tp_k = {e: scratch.pos[e] for g in scope for e in (2 * g, 2 * g + 1)}
            te_k = scratch.empty
        assign = _assign_sides(scope, tp_k, te_k, cells1, cells2, shared, split.shared)
        if assign is not None:
            tpos, tempty, rot = tp_k, te_k, k
            break
    if assign is None:
        raise SolverBug("no rotation yields a one-sided split target")
    side_t, bf, second = assign
    first = 3 - second

    if split.shared == "three":
        bridge = _dance_three(state, ctx, ctx1, ctx2, cv, cx, cy, side_t, second, bf)
    else:
        bridge = None
        _dance_one(state, ctx, ctx1, ctx2, cv, side_t)

    ctx_first = ctx1 if first == 1 else ctx2
    ctx_second = ctx1 if second == 1 else ctx2

    tp1 = {}
    for g, _ in ring_of(state, ctx_first):
        if g == bridge:
            # the buffer gourd keeps its parked spot during the first side
            tp1[2 * g] = state.pos[2 * g]
            tp1[2 * g + 1] = state.pos[2 * g + 1]
        else:
            tp1[2 * g] = tpos[2 * g]
            tp1[2 * g + 1] = tpos[2 * g + 1]
    _dnc(state, ctx_first, tp1, cv, depth + 1)

    tp2 = {}
    for g, _ in ring_of(state, ctx_second):
        tp2[2 * g] = tpos[2 * g]
        tp2[2 * g + 1] = tpos[2 * g + 1]
    _dnc(state, ctx_second, tp2, tempty, depth + 1)

    if rot:
        rotate_units(state, ctx, -rot)
    for g in scope:
        if state.pos[2 * g] != tpos_orig[2 * g] or state.pos[2 * g + 1] != tpos_orig[2 * g + 1]:
            raise SolverBug("split sort missed the target")
    if state.empty != tempty_orig:
        raise SolverBug("split sort missed the empty cell")


# ---------------------------------------------------------------------------
# Public API

@dataclass(frozen=True)
class AlignedState:
    """Every gourd on a cycle edge: ring read ccw starting at the gourd just
    ccw of E; empty_index is E's cycle position.  `config` snapshots the
    concrete configuration (for labels and replay)."""
    cycle: HamiltonianCycle
    ring: tuple[tuple[int, int], ...]
    empty_index: int
    config: Configuration


def _state_of(t: BoardTables, c: Configuration) -> SolveState:
    occ, pos, empty = pack_config(t, c)
    return SolveState(t, occ, pos, empty)


def _aligned_of(t: BoardTables, ctx: CycleContext, state: SolveState,
                template: Configuration) -> AlignedState:
    from .tables import unpack_config

    ring = tuple(ring_of(state, ctx))
    return AlignedState(ctx.h, ring, ctx.eidx(state), unpack_config(t, state.pos, template))


def align_phase(b: Board, h: HamiltonianCycle, c: Configuration) -> tuple[list[Move], AlignedState]:
    t = BoardTables(b)
    ctx = CycleContext(t, h)
    state = _state_of(t, c)
    align_state(state, ctx)
    return state.moves(), _aligned_of(t, ctx, state, c)


def rotate_cycle(st: AlignedState, k: int) -> list[Move]:
    b = make_board(list(st.cycle.order))
    t = BoardTables(b)
    ctx = CycleContext(t, st.cycle)
    state = _state_of(t, st.config)
    rotate_units(state, ctx, k)
    return state.moves()


def _target_pos_of(ctx: CycleContext, target: AlignedState):
    tpos = {}
    e = target.empty_index
    for j, (g, o) in enumerate(target.ring):
        pa, pb = ctx.at(e + 1 + 2 * j), ctx.at(e + 2 + 2 * j)
        tpos[2 * g + o] = pa
        tpos[2 * g + (o ^ 1)] = pb
    return tpos, ctx.at(e)


def sort_cubic(st: AlignedState, target_ring: AlignedState) -> list[Move]:
    b = make_board(list(st.cycle.order))
    t = BoardTables(b)
    ctx = CycleContext(t, st.cycle)
    state = _state_of(t, st.config)
    tpos, tempty = _target_pos_of(ctx, target_ring)
    core_sort(state, ctx, tpos, tempty)
    return state.moves()


def sort_quadratic(b: Board, st: AlignedState, target_ring: AlignedState) -> list[Move]:
    t = BoardTables(b)
    ctx = CycleContext(t, st.cycle)
    state = _state_of(t, st.config)
    tpos, tempty = _target_pos_of(ctx, target_ring)
    _dnc(state, ctx, tpos, tempty)
    return state.moves()


@dataclass(frozen=True)
class SolvePlan:
    s1: tuple[Move, ...]
    s2: tuple[Move, ...]
    s3: tuple[Move, ...]
    stats: dict
    strategy: str

    @property
    def moves(self) -> list[Move]:
        return list(self.s1) + list(self.s2) + list(self.s3)


def _match_gourds(start: Configuration, target: Configuration) -> dict[int, tuple[int, bool]]:
    """Map start gourd index -> (target gourd index, flipped) by label pair,
    greedily in listing order."""
    pools: dict[tuple[str, str], list[int]] = {}
    for j, g in enumerate(target.gourds):
        pools.setdefault(tuple(sorted((g.label_a, g.label_b))), []).append(j)
    out = {}
    for i, g in enumerate(start.gourds):
        key = tuple(sorted((g.label_a, g.label_b)))
        if not pools.get(key):
            raise ColorMismatchError(f"no target gourd with labels {key}")
        j = pools[key].pop(0)
        out[i] = (j, target.gourds[j].label_a != g.label_a)
    return out


def _target_config(start: Configuration, target) -> Configuration:
    if isinstance(target, Configuration):
        return target
    from .puzzle import color_assignment

    assignment = color_assignment(start, target)
    blanks = [c for c in target.cells if target.label(c) == "."]
    gourds = []
    for g in start.gourds:
        a, bcell = assignment[g]
        gourds.append(Gourd(a, bcell, g.label_a, g.label_b))
    return Configuration(tuple(gourds), blanks[0])


def solve(b: Board, start: Configuration, target, strategy: str = "quadratic") -> SolvePlan:
    """Produce a verified move plan from start to target (a Configuration, or
    a labeled Board whose tiling is chosen automatically)."""
    report = validate_proper(b)
    if not report.proper:
        raise ImproperBoardError(report)
    if strategy not in ("cubic", "quadratic"):
        raise ValueError(f"unknown strategy {strategy!r}")
    target_conf = _target_config(start, target)
    mapping = _match_gourds(start, target_conf)

    h = find_hamiltonian(b)
    if strategy == "quadratic":
        h = repair_seven_runs(b, h)
    t = BoardTables(b)
    ctx = CycleContext(t, h)

    state = _state_of(t, start)
    align_state(state, ctx)
    m1 = state.mark()

    tgt_state = _state_of(t, target_conf)
    align_state(tgt_state, ctx)

    tpos = {}
    for i, (j, flipped) in mapping.items():
        tpos[2 * i] = tgt_state.pos[2 * j + (1 if flipped else 0)]
        tpos[2 * i + 1] = tgt_state.pos[2 * j + (0 if flipped else 1)]
    tempty = tgt_state.empty

    if strategy == "cubic":
        core_sort(state, ctx, tpos, tempty)
    else:
        _dnc(state, ctx, tpos, tempty)
    m2 = state.mark()

    _replay_inverted(state, tgt_state.log)
    moves = state.moves()
    s1, s2, s3 = moves[:m1], moves[m1:m2], moves[m2:]

    final = verify_sequence(b, start, moves)
    if final.cell_labels() != target_conf.cell_labels() or final.empty != target_conf.empty:
        raise AssertionError("solve plan verification failed")
    stats = {"s1": m1, "s2": m2 - m1, "s3": len(moves) - m2}
    return SolvePlan(tuple(s1), tuple(s2), tuple(s3), stats, strategy)


def displacement_lower_bound(b: Board, start: Configuration, target,
                             assignment=None) -> int:
    """ceil(total end displacement / 2): each move displaces one gourd and
    shifts each of its ends by at most one cell."""
    import math

    import networkx as nx

    from .board import board_graph

    g = board_graph(b)
    dist = dict(nx.all_pairs_shortest_path_length(g))
    if assignment is None:
        target_conf = _target_config(start, target)
        mapping = _match_gourds(start, target_conf)
        assignment = {}
        for i, (j, flipped) in mapping.items():
            tg = target_conf.gourds[j]
            cells = (tg.end_b, tg.end_a) if flipped else (tg.end_a, tg.end_b)
            assignment[start.gourds[i]] = cells
    total = 0
    for gourd, (ta, tb) in assignment.items():
        direct = dist[gourd.end_a][ta] + dist[gourd.end_b][tb]
        if gourd.label_a == gourd.label_b:
            direct = min(direct, dist[gourd.end_a][tb] + dist[gourd.end_b][ta])
        total += direct
    return math.ceil(total / 2)


def serialize_plan(plan: SolvePlan) -> str:
    from .puzzle import serialize_moves

    lines = ["gourds-plan v1"]
    for marker, seq in (("[S1]", plan.s1), ("[S2]", plan.s2), ("[S3]", plan.s3)):
        lines.append(marker)
        text = serialize_moves(seq)
        if text:
            lines.append(text.rstrip("\n"))
    lines.append(f"# moves s1={plan.stats['s1']} s2={plan.stats['s2']} s3={plan.stats['s3']}")
    return "\n".join(line for line in lines if line != "") + "\n"


def parse_plan(text: str) -> SolvePlan:
    from .puzzle import parse_moves

    lines = text.splitlines()
    if not lines or lines[0].strip() != "gourds-plan v1":
        from .errors import BoardParseError

        raise BoardParseError("expected header 'gourds-plan v1'", 1)
    sections: dict[str, list[str]] = {"[S1]": [], "[S2]": [], "[S3]": []}
    current = None
    for raw in lines[1:]:
        line = raw.strip()
        if line in sections:
            current = line
        elif line.startswith("m ") and current is not None:
            sections[current].append(line)
    seqs = {k: parse_moves("\n".join(v)) for k, v in sections.items()}
    stats = {"s1": len(seqs["[S1]"]), "s2": len(seqs["[S2]"]), "s3": len(seqs["[S3]"])}
    return SolvePlan(tuple(seqs["[S1]"]), tuple(seqs["[S2]"]), tuple(seqs["[S3]"]),
                     stats, "unknown")
