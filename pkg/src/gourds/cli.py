"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (improper board, UNSAT, failed
replay), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from .board import parse_board, serialize_board, validate_proper
from .errors import BoardParseError, GourdsError, ImproperBoardError
from .hamilton import decomposition_dump, find_hamiltonian
from .placement import (
    PlacementInstance,
    enumerate_placements,
    parse_formula,
    parse_instance,
    reduce_1in3sat,
    serialize_instance,
    solve_placement,
    verify_reduction,
)
from .puzzle import (
    PIVOT_RULES,
    count_reachable,
    parse_config,
    parse_moves,
    scramble,
    serialize_config,
    serialize_moves,
    verify_sequence,
)
from .solver import displacement_lower_bound, serialize_plan, solve


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_target(path: str):
    """A target file holds either a configuration or a colored board."""
    text = _read(path)
    if text.lstrip().startswith("gourds-config"):
        return parse_config(text)
    return parse_board(text)


def cmd_validate(args) -> int:
    b = parse_board(_read(args.board))
    report = validate_proper(b)
    print(report)
    return 0 if report.proper else 1


def cmd_decompose(args) -> int:
    b = parse_board(_read(args.board))
    report = validate_proper(b)
    if not report.proper:
        print(report, file=sys.stderr)
        return 1
    h = find_hamiltonian(b)
    _write(args.out, decomposition_dump(b, h))
    return 0


def cmd_solve(args) -> int:
    b = parse_board(_read(args.board))
    start = parse_config(_read(args.start))
    target = _load_target(args.target)
    plan = solve(b, start, target, args.strategy)
    _write(args.out, serialize_plan(plan))
    total = sum(plan.stats.values())
    print(
        f"strategy={plan.strategy} moves={total} "
        f"s1={plan.stats['s1']} s2={plan.stats['s2']} s3={plan.stats['s3']}",
        file=sys.stderr,
    )
    return 0


def cmd_oracle(args) -> int:
    b = parse_board(_read(args.board))
    c = parse_config(_read(args.config))
    print(f"states: {count_reachable(b, c, args.mode)}")
    return 0


def cmd_scramble(args) -> int:
    b = parse_board(_read(args.board))
    c = parse_config(_read(args.config))
    mixed, trace = scramble(b, c, args.steps, args.seed)
    _write(args.out, serialize_config(mixed))
    print(serialize_moves(trace), end="", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    b = parse_board(_read(args.board))
    start = parse_config(_read(args.start))
    text = _read(args.config)
    if text.lstrip().startswith("gourds-plan"):
        from .solver import parse_plan

        moves = parse_plan(text).moves
    else:
        moves = parse_moves(text)
    final = verify_sequence(b, start, moves)
    if args.target:
        target = parse_config(_read(args.target))
        if final.cell_labels() != target.cell_labels() or final.empty != target.empty:
            print("replay diverges from the target", file=sys.stderr)
            return 1
    _write(args.out, serialize_config(final))
    return 0


def cmd_place(args) -> int:
    inst = parse_instance(_read(args.board))
    if args.limit:
        solutions = enumerate_placements(inst, args.limit)
        _write(args.out, "".join(serialize_config(s) for s in solutions))
        print(f"solutions: {len(solutions)}", file=sys.stderr)
        return 0 if solutions else 1
    cfg = solve_placement(inst)
    if cfg is None:
        print("UNSAT")
        return 1
    _write(args.out, serialize_config(cfg))
    return 0


def cmd_reduce(args) -> int:
    f = parse_formula(_read(args.formula))
    inst = reduce_1in3sat(f)
    report = verify_reduction(inst, f)
    _write(args.out, serialize_instance(inst))
    print(report, file=sys.stderr)
    return 0 if report.ok else 1


def cmd_bench(args) -> int:
    from .boards import aligned_configuration, numbered_labels, random_proper_board
    from .kernel import IMPL

    rng = random.Random(args.seed)
    sizes = [21, 41, 61, 81, 101][: args.limit or 5]
    rows = ["n,strategy,moves_s1,moves_s2,moves_s3,lower_bound,wall_time"]
    for size in sizes:
        b = random_proper_board(size, rng.randrange(1 << 30))
        h = find_hamiltonian(b)
        base = aligned_configuration(h, numbered_labels((size - 1) // 2))
        start, _ = scramble(b, base, args.steps, rng.randrange(1 << 30))
        target, _ = scramble(b, base, args.steps, rng.randrange(1 << 30))
        lb = displacement_lower_bound(b, start, target)
        for strategy in ("cubic", "quadratic"):
            t0 = time.perf_counter()
            plan = solve(b, start, target, strategy)
            dt = time.perf_counter() - t0
            rows.append(
                f"{(size - 1) // 2},{strategy},{plan.stats['s1']},"
                f"{plan.stats['s2']},{plan.stats['s3']},{lb},{dt:.3f}"
            )
    _write(args.out, "\n".join(rows) + "\n")
    print(f"kernel: {IMPL}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gourds")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *flags):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        for flag, kw in flags:
            sp.add_argument(flag, **kw)
        return sp

    req = {"required": True}
    add("validate", cmd_validate, ("--board", req))
    add("decompose", cmd_decompose, ("--board", req), ("--out", {}))
    add(
        "solve", cmd_solve, ("--board", req), ("--start", req), ("--target", req),
        ("--strategy", {"choices": ["cubic", "quadratic"], "default": "quadratic"}),
        ("--out", {}),
    )
    add(
        "oracle", cmd_oracle, ("--board", req), ("--config", req),
        ("--mode", {"choices": ["pivot", "sharp"], "default": PIVOT_RULES}),
    )
    add(
        "scramble", cmd_scramble, ("--board", req), ("--config", req),
        ("--steps", {"type": int, "default": 50}),
        ("--seed", {"type": int, "default": 0}), ("--out", {}),
    )
    add(
        "verify", cmd_verify, ("--board", req), ("--start", req),
        ("--config", {"required": True, "help": "plan or move list to replay"}),
        ("--target", {}), ("--out", {}),
    )
    add(
        "place", cmd_place,
        ("--board", {"required": True, "help": "placement instance file"}),
        ("--limit", {"type": int}), ("--out", {}),
    )
    add("reduce", cmd_reduce, ("--formula", req), ("--out", {}))
    add(
        "bench", cmd_bench, ("--seed", {"type": int, "default": 0}),
        ("--steps", {"type": int, "default": 60}),
        ("--limit", {"type": int}), ("--out", {}),
    )
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BoardParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (ImproperBoardError, GourdsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
