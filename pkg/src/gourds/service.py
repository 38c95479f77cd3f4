"""Session-oriented HTTP facade over the engine and solver.

Sessions live in memory with idle expiry; per-session operations are
serialized while distinct sessions run fully in parallel.  Run with
``python -m gourds.service --port 8000``.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .board import Board, parse_board, validate_proper
from .errors import GourdsError, IllegalMoveError
from .puzzle import (
    PIVOT_RULES,
    SHARP_TURN_RULES,
    Configuration,
    Move,
    apply_move,
    legal_moves,
    parse_config,
    scramble,
)
from .solver import SolvePlan, solve

SESSION_TTL = 3600.0


@dataclass
class Session:
    id: str
    board: Board
    mode: str
    proper: bool
    current: Configuration
    target: Configuration | Board | None
    history: list[Move] = field(default_factory=list)
    # tail of the last hinted plan, valid while current == hint_anchor
    hint_queue: list[Move] = field(default_factory=list)
    hint_anchor: Configuration | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


class CreateBody(BaseModel):
    board: str
    config: str
    target: str | None = None
    mode: str = PIVOT_RULES


class CellBody(BaseModel):
    q: int
    r: int


class MoveBody(BaseModel):
    tail: CellBody
    head: CellBody
    target: CellBody
    kind: str


class ScrambleBody(BaseModel):
    steps: int = 50
    seed: int = 0


def _cell_json(c) -> dict:
    return {"q": c.q, "r": c.r}


def _move_json(m: Move) -> dict:
    return {
        "tail": _cell_json(m.tail),
        "head": _cell_json(m.head),
        "target": _cell_json(m.target),
        "kind": m.kind,
    }


def _config_json(c: Configuration) -> dict:
    return {
        "gourds": [
            {
                "a": _cell_json(g.end_a),
                "b": _cell_json(g.end_b),
                "label_a": g.label_a,
                "label_b": g.label_b,
            }
            for g in c.gourds
        ],
        "empty": _cell_json(c.empty),
    }


def _board_json(b: Board) -> dict:
    return {
        "cells": [
            {"q": c.q, "r": c.r, "label": b.label(c)} for c in sorted(b.cells)
        ]
    }


def _target_json(t: Configuration | Board | None):
    if t is None:
        return None
    if isinstance(t, Configuration):
        return {"config": _config_json(t)}
    return {"board": _board_json(t)}


def _solved(s: Session) -> bool | None:
    if s.target is None:
        return None
    if isinstance(s.target, Configuration):
        return (
            s.current.cell_labels() == s.target.cell_labels()
            and s.current.empty == s.target.empty
        )
    labels = s.current.cell_labels()
    for c in s.target.cells:
        want = s.target.label(c)
        if want != "." and labels.get(c) != want:
            return False
    return s.target.label(s.current.empty) == "."


def _state_json(s: Session) -> dict:
    return {
        "id": s.id,
        "proper": s.proper,
        "mode": s.mode,
        "board": _board_json(s.board),
        "current": _config_json(s.current),
        "target": _target_json(s.target),
        "history": [_move_json(m) for m in s.history],
        "solved": _solved(s),
    }


def _plan_json(plan: SolvePlan) -> dict:
    return {
        "strategy": plan.strategy,
        "stats": dict(plan.stats),
        "s1": [_move_json(m) for m in plan.s1],
        "s2": [_move_json(m) for m in plan.s2],
        "s3": [_move_json(m) for m in plan.s3],
    }


def create_app() -> FastAPI:
    app = FastAPI(title="gourds")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def _purge() -> None:
        now = time.monotonic()
        for sid in [k for k, s in sessions.items() if now - s.last_used > SESSION_TTL]:
            sessions.pop(sid, None)

    def _get(sid: str) -> Session:
        with registry_lock:
            _purge()
            s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
        s.last_used = time.monotonic()
        return s

    @app.post("/session")
    def create_session(body: CreateBody):
        if body.mode not in (PIVOT_RULES, SHARP_TURN_RULES):
            raise HTTPException(status_code=400, detail=f"unknown mode {body.mode!r}")
        try:
            board = parse_board(body.board)
            config = parse_config(body.config)
            target = None
            if body.target is not None:
                if body.target.lstrip().startswith("gourds-config"):
                    target = parse_config(body.target)
                else:
                    target = parse_board(body.target)
            # reject configurations that do not cover the board
            legal_moves(board, config, body.mode)
        except GourdsError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        report = validate_proper(board)
        s = Session(
            id=uuid.uuid4().hex,
            board=board,
            mode=body.mode,
            proper=report.proper,
            current=config,
            target=target,
        )
        with registry_lock:
            _purge()
            sessions[s.id] = s
        return _state_json(s)

    @app.get("/session/{sid}")
    def get_state(sid: str):
        s = _get(sid)
        with s.lock:
            return _state_json(s)

    @app.get("/session/{sid}/moves")
    def get_moves(sid: str):
        s = _get(sid)
        with s.lock:
            return {"moves": [_move_json(m) for m in legal_moves(s.board, s.current, s.mode)]}

    @app.post("/session/{sid}/move")
    def post_move(sid: str, body: MoveBody):
        s = _get(sid)
        with s.lock:
            wanted = (
                (body.tail.q, body.tail.r),
                (body.head.q, body.head.r),
                (body.target.q, body.target.r),
                body.kind,
            )
            for m in legal_moves(s.board, s.current, s.mode):
                if (tuple(m.tail), tuple(m.head), tuple(m.target), m.kind) == wanted:
                    s.current = apply_move(s.current, m)
                    s.history.append(m)
                    return _state_json(s)
            raise HTTPException(status_code=409, detail="illegal move")

    def _plan(s: Session, strategy: str) -> SolvePlan:
        if s.target is None:
            raise HTTPException(status_code=409, detail="session has no target")
        try:
            return solve(s.board, s.current, s.target, strategy)
        except GourdsError as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.post("/session/{sid}/hint")
    def post_hint(sid: str):
        s = _get(sid)
        with s.lock:
            # A plan recomputed after every single move need not shrink (the
            # solver is not suffix-stable), so a player who always takes the
            # hint could loop.  Serve the remembered plan tail while the
            # player follows it; replan only on deviation.
            if s.hint_anchor != s.current or not s.hint_queue:
                moves = _plan(s, "quadratic").moves
            else:
                moves = s.hint_queue
            if moves:
                s.hint_queue = moves[1:]
                s.hint_anchor = apply_move(s.current, moves[0])
            else:
                s.hint_queue, s.hint_anchor = [], None
            return {
                "move": _move_json(moves[0]) if moves else None,
                "remaining": len(moves),
            }

    @app.post("/session/{sid}/solve")
    def post_solve(sid: str, strategy: str = "quadratic"):
        s = _get(sid)
        with s.lock:
            return _plan_json(_plan(s, strategy))

    @app.post("/session/{sid}/scramble")
    def post_scramble(sid: str, body: ScrambleBody):
        s = _get(sid)
        with s.lock:
            try:
                mixed, trace = scramble(s.board, s.current, body.steps, body.seed, s.mode)
            except IllegalMoveError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            s.current = mixed
            s.history.extend(trace)
            return _state_json(s)

    return app


app = create_app()


def main(argv=None) -> None:
    import argparse

    import uvicorn

    p = argparse.ArgumentParser(prog="gourds-service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    args = p.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
