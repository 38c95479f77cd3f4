"""Colored gourd placement: exact tiling search plus the Monotone 1-in-3SAT
instance generator.

A placement instance is a fully colored board and a budget of color pairs.
Solving it means tiling all cells but one with dominoes whose end colors are
drawn from the budget.  The generator builds boards four hexagons high from
variable and clause gadget templates; tiling the result is possible exactly
when the formula is 1-in-3 satisfiable.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .board import Board, is_color, parse_board
from .errors import BoardParseError, GuardError, PlacementError
from .hexgeom import HexCoord, neighbors
from .puzzle import Configuration, Gourd

ENUMERATION_GUARD_CELLS = 31
BRUTE_GUARD_VARS = 24

F_COLOR = "c0"
V_COLOR = "c1"


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class Formula1in3:
    """Monotone 1-in-3SAT formula: positive 3-clauses over named variables."""
    variables: tuple[str, ...]
    clauses: tuple[tuple[str, str, str], ...]


def validate_formula(f: Formula1in3, strict: bool = True) -> None:
    """Check clause arity and membership; with strict=True also require every
    variable to occur in exactly three clauses."""
    if len(set(f.variables)) != len(f.variables):
        raise PlacementError("duplicate variable names")
    known = set(f.variables)
    occ = Counter()
    for cl in f.clauses:
        if len(cl) != 3 or len(set(cl)) != 3:
            raise PlacementError(f"clause {cl} must have three distinct variables")
        for v in cl:
            if v not in known:
                raise PlacementError(f"clause variable {v!r} is not declared")
            occ[v] += 1
    if strict:
        bad = [v for v in f.variables if occ[v] != 3]
        if bad:
            raise PlacementError(f"variables without exactly three occurrences: {bad}")


def parse_formula(text: str) -> Formula1in3:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "gourds-1in3 v1":
        raise BoardParseError("expected header 'gourds-1in3 v1'", 1)
    clauses = []
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "c" or len(parts) != 4:
            raise BoardParseError(f"expected 'c <var> <var> <var>', got {line!r}", i)
        clauses.append(tuple(parts[1:4]))
    variables = tuple(sorted({v for cl in clauses for v in cl}))
    return Formula1in3(variables, tuple(clauses))


def serialize_formula(f: Formula1in3) -> str:
    lines = ["gourds-1in3 v1"]
    for cl in f.clauses:
        lines.append("c " + " ".join(cl))
    return "\n".join(lines) + "\n"


def brute_1in3sat(f: Formula1in3) -> list[dict[str, bool]]:
    """All assignments with exactly one true variable per clause, by
    exhaustive enumeration.  Occurrence counts are not enforced here."""
    validate_formula(f, strict=False)
    if len(f.variables) > BRUTE_GUARD_VARS:
        raise GuardError(f"brute force capped at {BRUTE_GUARD_VARS} variables")
    out = []
    for bits in itertools.product((False, True), repeat=len(f.variables)):
        a = dict(zip(f.variables, bits))
        if all(sum(a[v] for v in cl) == 1 for cl in f.clauses):
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# Placement instances

@dataclass(frozen=True)
class PlacementInstance:
    """Fully colored board plus a budget of unordered color pairs."""
    board: Board
    budget: dict[tuple[str, str], int]

    def total_gourds(self) -> int:
        return sum(self.budget.values())


def instance_problems(inst: PlacementInstance) -> list[str]:
    problems = []
    uncolored = [c for c in inst.board.cells if not is_color(inst.board.label(c))]
    if uncolored:
        problems.append(f"{len(uncolored)} cells are not colored")
    for key, cnt in inst.budget.items():
        if key != _pair(*key) or cnt <= 0:
            problems.append(f"bad budget entry {key}: {cnt}")
    if 2 * inst.total_gourds() + 1 != len(inst.board.cells):
        problems.append(
            f"budget covers {2 * inst.total_gourds()} cells "
            f"but the board has {len(inst.board.cells)}"
        )
    if not uncolored:
        cells = Counter(inst.board.label(c) for c in inst.board.cells)
        ends = Counter()
        for (a, b), cnt in inst.budget.items():
            ends[a] += cnt
            ends[b] += cnt
        surplus = {k: cells[k] - ends[k] for k in set(cells) | set(ends)}
        extras = {k: d for k, d in surplus.items() if d != 0}
        if list(extras.values()) != [1]:
            problems.append(f"cell/end color counts must differ by one single slot, got {extras}")
    return problems


def parse_instance(text: str) -> PlacementInstance:
    board_lines = []
    budget: dict[tuple[str, str], int] = {}
    lines = text.splitlines()
    if not lines or lines[0].strip() != "gourds-placement v1":
        raise BoardParseError("expected header 'gourds-placement v1'", 1)
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("b "):
            parts = line.split()
            if len(parts) != 4:
                raise BoardParseError("expected 'b <colorA> <colorB> <count>'", i)
            key = _pair(parts[1], parts[2])
            budget[key] = budget.get(key, 0) + int(parts[3])
        else:
            board_lines.append(line)
    board = parse_board("gourds-board v1\n" + "\n".join(board_lines))
    return PlacementInstance(board, budget)


def serialize_instance(inst: PlacementInstance) -> str:
    lines = ["gourds-placement v1"]
    for c in sorted(inst.board.cells):
        lines.append(f"{c.q} {c.r} {inst.board.label(c)}")
    for (a, b), cnt in sorted(inst.budget.items()):
        lines.append(f"b {a} {b} {cnt}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Tiling search

class _Tiler:
    """Backtracking domino tiler.  The budget is a capacity: each placed
    domino consumes one matching pair.  Exactly one cell stays uncovered;
    either a forced one or a deferred branch tried after all pair options."""

    def __init__(self, board: Board, budget, forced_empty, exact=True):
        self.exact = exact
        self.label = {c: board.label(c) for c in board.cells}
        self.nbrs = {
            c: [d for d in neighbors(c) if d in board.cells] for c in board.cells
        }
        self.budget = Counter({_pair(*k): v for k, v in budget.items()})
        self.ends = Counter()
        for (a, b), cnt in self.budget.items():
            self.ends[a] += cnt
            self.ends[b] += cnt
        self.uncovered = set(board.cells)
        self.cells_left = Counter(self.label[c] for c in board.cells)
        self.empty_cell = None
        if forced_empty is not None:
            fe = HexCoord(*forced_empty)
            if fe not in self.uncovered:
                raise PlacementError(f"forced empty cell {fe} is not on the board")
            self.uncovered.discard(fe)
            self.cells_left[self.label[fe]] -= 1
            self.empty_cell = fe
        self.groups = self._pair_components()

    def _pair_components(self) -> list[set[HexCoord]]:
        """Connected components under pairable adjacency (budget holds a key
        for both labels).  Cells of different components never share a gourd,
        so the search settles one component at a time."""
        comps = []
        seen = set()
        for c in sorted(self.uncovered):
            if c in seen:
                continue
            comp = {c}
            seen.add(c)
            stack = [c]
            while stack:
                d = stack.pop()
                for e in self.nbrs[d]:
                    if e in self.uncovered and e not in seen \
                            and _pair(self.label[d], self.label[e]) in self.budget:
                        seen.add(e)
                        comp.add(e)
                        stack.append(e)
            comps.append(comp)
        comps.sort(key=lambda comp: (len(comp), min(comp)))
        return comps

    def _feasible(self) -> bool:
        pending = 1 if self.empty_cell is None else 0
        deficit = 0
        for k, left in self.cells_left.items():
            deficit += max(0, left - self.ends[k])
            if deficit > pending:
                return False
        if self.exact:
            # every budgeted end must still find a cell of its color
            for k, e in self.ends.items():
                if e > self.cells_left[k]:
                    return False
        # every uncovered region must pair up internally
        seen = set()
        odd = 0
        for c in self.uncovered:
            if c in seen:
                continue
            size = 0
            stack = [c]
            seen.add(c)
            while stack:
                d = stack.pop()
                size += 1
                for e in self.nbrs[d]:
                    if e in self.uncovered and e not in seen:
                        seen.add(e)
                        stack.append(e)
            if size % 2:
                odd += 1
                if odd > pending:
                    return False
        return True

    def _pick(self):
        # settling one component before the next lets the budget cuts fire
        # right after each, instead of deep inside an unrelated region
        pool = next(
            (g & self.uncovered for g in self.groups if g & self.uncovered),
            self.uncovered,
        )
        best = None
        best_opts = None
        for c in pool:
            la = self.label[c]
            opts = []
            for d in self.nbrs[c]:
                if d in self.uncovered and self.budget[_pair(la, self.label[d])] > 0:
                    opts.append(d)
            if best is None or len(opts) < len(best_opts) or (
                len(opts) == len(best_opts) and c < best
            ):
                best, best_opts = c, opts
                if not opts:
                    break
        return best, best_opts

    def search(self, emit) -> bool:
        """Depth-first search; emit(pairs, empty) is called per solution and
        returns True to stop."""
        if not self.uncovered:
            return emit(list(self.pairs), self.empty_cell)
        if not self._feasible():
            return False
        c, opts = self._pick()
        la = self.label[c]
        self.uncovered.discard(c)
        self.cells_left[la] -= 1
        for d in sorted(opts):
            key = _pair(la, self.label[d])
            self.budget[key] -= 1
            self.ends[key[0]] -= 1
            self.ends[key[1]] -= 1
            self.uncovered.discard(d)
            self.cells_left[self.label[d]] -= 1
            self.pairs.append((c, d))
            if self.search(emit):
                return True
            self.pairs.pop()
            self.cells_left[self.label[d]] += 1
            self.uncovered.add(d)
            self.ends[key[1]] += 1
            self.ends[key[0]] += 1
            self.budget[key] += 1
        if self.empty_cell is None:
            self.empty_cell = c
            if self.search(emit):
                return True
            self.empty_cell = None
        self.cells_left[la] += 1
        self.uncovered.add(c)
        return False

    def run(self, emit) -> bool:
        self.pairs: list[tuple[HexCoord, HexCoord]] = []
        return self.search(emit)


def search_tiling(board: Board, budget, forced_empty=None):
    """First domino tiling of all cells but one, with pair colors drawn from
    the budget, or None.  forced_empty fixes the uncovered cell."""
    found = {}

    def emit(pairs, empty):
        found["pairs"] = pairs
        found["empty"] = empty
        return True

    if _Tiler(board, budget, forced_empty).run(emit):
        return found["pairs"]
    return None


def _config_of(board: Board, pairs, empty) -> Configuration:
    gourds = tuple(
        Gourd(a, b, board.label(a), board.label(b)) for a, b in sorted(pairs)
    )
    return Configuration(gourds, empty)


def solve_placement(inst: PlacementInstance) -> Configuration | None:
    """Tiling of the instance consuming the budget exactly, or None when the
    exhaustive search proves there is none."""
    problems = instance_problems(inst)
    if problems:
        raise PlacementError("; ".join(problems))
    found = {}

    def emit(pairs, empty):
        found["cfg"] = _config_of(inst.board, pairs, empty)
        return True

    if _Tiler(inst.board, inst.budget, None).run(emit):
        return found["cfg"]
    return None


def enumerate_placements(inst: PlacementInstance, limit: int) -> list[Configuration]:
    """All tilings (deduplicated, up to `limit`) of a small instance.  The
    budget acts as an upper bound here, so gadget fixtures can carry their
    full surrounding budget."""
    if len(inst.board.cells) > ENUMERATION_GUARD_CELLS:
        raise GuardError(
            f"enumeration capped at {ENUMERATION_GUARD_CELLS} cells, "
            f"got {len(inst.board.cells)}"
        )
    seen = set()
    out: list[Configuration] = []

    def emit(pairs, empty):
        key = (frozenset(frozenset(p) for p in pairs), empty)
        if key not in seen:
            seen.add(key)
            out.append(_config_of(inst.board, pairs, empty))
        return len(out) >= limit

    _Tiler(inst.board, inst.budget, None, exact=False).run(emit)
    return out


# ---------------------------------------------------------------------------
# The 1-in-3SAT reduction

def _template(name: str) -> dict:
    path = resources.files("gourds").joinpath(f"data/{name}.json")
    return json.loads(path.read_text())


@dataclass(frozen=True)
class _Gadget:
    kind: str                       # "variable" or "clause"
    index: int
    colored: dict[HexCoord, str]    # absolute cell -> color label
    left: frozenset[HexCoord]       # clause only: the small left triangle
    cells: frozenset[HexCoord]      # full block footprint


def _layout(f: Formula1in3) -> tuple[dict[HexCoord, str], list[_Gadget], HexCoord]:
    """Absolute cell labels, gadget footprints, and the spare bottom-right F
    cell for the reduction board."""
    var_t = _template("variable_gadget")
    cls_t = _template("clause_gadget")
    color_of = {v: f"c{i + 2}" for i, v in enumerate(f.variables)}
    labels: dict[HexCoord, str] = {}
    gadgets: list[_Gadget] = []
    x0 = 0

    def block(width, height):
        cells = [HexCoord(x0 + q, r) for q in range(width) for r in range(height)]
        for c in cells:
            labels[c] = F_COLOR
        return frozenset(cells)

    for i, v in enumerate(f.variables):
        cells = block(var_t["width"], var_t["height"])
        colored = {}
        for q, r, role in var_t["ring"]:
            c = HexCoord(x0 + q, r)
            colored[c] = color_of[v] if role == "x" else V_COLOR
        labels.update(colored)
        gadgets.append(_Gadget("variable", i, colored, frozenset(), cells))
        x0 += var_t["width"]

    for j, cl in enumerate(f.clauses):
        cells = block(cls_t["width"], cls_t["height"])
        role_color = {
            "X": color_of[cl[0]], "Y": color_of[cl[1]], "Z": color_of[cl[2]],
            "V": V_COLOR,
        }
        colored = {}
        left = set()
        for q, r, role in cls_t["left"]:
            c = HexCoord(x0 + q, r)
            colored[c] = role_color[role]
            left.add(c)
        for q, r, role in cls_t["right"]:
            colored[HexCoord(x0 + q, r)] = role_color[role]
        labels.update(colored)
        gadgets.append(_Gadget("clause", j, colored, frozenset(left), cells))
        x0 += cls_t["width"]

    spare = HexCoord(x0 - 1, cls_t["height"]) if f.clauses else HexCoord(x0 - 1, 4)
    labels[spare] = F_COLOR
    return labels, gadgets, spare


def reduce_1in3sat(f: Formula1in3) -> PlacementInstance:
    """Board and budget whose placement instance is solvable exactly when f
    is 1-in-3 satisfiable."""
    validate_formula(f, strict=True)
    n, m = len(f.variables), len(f.clauses)
    labels, _, _ = _layout(f)
    board = Board(frozenset(labels), dict(labels))
    color_of = {v: f"c{i + 2}" for i, v in enumerate(f.variables)}
    budget: Counter = Counter()
    for v in f.variables:
        xv = color_of[v]
        budget[_pair(xv, xv)] += 3
        budget[_pair(V_COLOR, V_COLOR)] += 3
        budget[_pair(xv, V_COLOR)] += 6
        budget[_pair(F_COLOR, F_COLOR)] += 10
    for cl in f.clauses:
        xi, xj, xk = (color_of[v] for v in cl)
        budget[_pair(xi, xj)] += 1
        budget[_pair(xi, xk)] += 1
        budget[_pair(xj, xk)] += 1
        budget[_pair(F_COLOR, F_COLOR)] += 12
    budget[_pair(V_COLOR, V_COLOR)] += 5 * m - 2 * n
    return PlacementInstance(board, dict(budget))


@dataclass(frozen=True)
class ReductionReport:
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def __str__(self) -> str:
        return "\n".join(
            f"{'ok  ' if passed else 'FAIL'} {name}: {detail}"
            for name, passed, detail in self.checks
        )


def verify_reduction(inst: PlacementInstance, f: Formula1in3) -> ReductionReport:
    """Structural checks on a generated instance: color counting, the single
    V cell in each clause's left triangle, and gadget separation."""
    checks = []
    labels, gadgets, spare = _layout(f)

    cells = Counter(inst.board.label(c) for c in inst.board.cells)
    ends: Counter = Counter()
    for (a, b), cnt in inst.budget.items():
        ends[a] += cnt
        ends[b] += cnt
    diffs = {k: cells[k] - ends[k] for k in set(cells) | set(ends) if cells[k] != ends[k]}
    ok = diffs == {F_COLOR: 1}
    checks.append((
        "color counts", ok,
        "cell counts equal budget end counts, single F surplus" if ok
        else f"count mismatches: {diffs}",
    ))

    bad_left = []
    for g in gadgets:
        if g.kind != "clause":
            continue
        vs = [c for c in g.left if inst.board.label(c) == V_COLOR]
        if len(vs) != 1:
            bad_left.append((g.index, len(vs)))
    checks.append((
        "left triangle", not bad_left,
        "each clause's left triangle holds a single V cell" if not bad_left
        else f"clauses with wrong V count: {bad_left}",
    ))

    overlaps = []
    contacts = []
    seen_cells: dict[HexCoord, int] = {}
    for gi, g in enumerate(gadgets):
        for c in g.colored:
            if c in seen_cells:
                overlaps.append(c)
            seen_cells[c] = gi
    for c, gi in seen_cells.items():
        for d in neighbors(c):
            if d in seen_cells and seen_cells[d] != gi:
                contacts.append((c, d))
            elif d in inst.board.cells and d not in seen_cells \
                    and inst.board.label(d) != F_COLOR:
                contacts.append((c, d))
    ok = not overlaps and not contacts
    checks.append((
        "gadget separation", ok,
        "colored footprints are disjoint and F-separated" if ok
        else f"overlaps={overlaps[:3]} contacts={contacts[:3]}",
    ))

    mismatched = [
        c for c, lab in labels.items()
        if c not in inst.board.cells or inst.board.label(c) != lab
    ]
    ok = not mismatched and len(inst.board.cells) == len(labels)
    checks.append((
        "layout", ok,
        f"board matches the generated layout ({len(labels)} cells, spare F at {spare})"
        if ok else f"{len(mismatched)} cells differ from the layout",
    ))
    return ReductionReport(tuple(checks))
