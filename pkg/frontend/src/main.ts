/** Browser wiring: one session, server-authoritative state, at most one
 * mutation in flight. */

import { Client, ServiceError } from "./client.js";
import {
  gourdAt,
  highlightsFor,
  moveForClick,
  type Highlight,
  type Selection,
} from "./model.js";
import { cellFromEvent, render } from "./render.js";
import type { Move, SessionState } from "./types.js";
import { sameCell } from "./types.js";

const client = new Client("");

let state: SessionState | null = null;
let moves: Move[] = [];
let selection: Selection | null = null;
let highlights: Highlight[] = [];
let hint: Move | null = null;
let busy = false;

const svg = document.querySelector<SVGSVGElement>("#board")!;
const status = document.querySelector<HTMLElement>("#status")!;

function redraw(): void {
  if (!state) return;
  render(svg, { state, selection, highlights, hint });
  const n = state.history.length;
  status.textContent =
    state.solved === true
      ? `solved in ${n} moves — well played!`
      : `${n} moves${state.proper ? "" : " (improper board: no solver help)"}`;
}

async function refresh(next: SessionState): Promise<void> {
  state = next;
  moves = await client.legalMoves(state.id);
  selection = null;
  highlights = [];
  redraw();
}

function toast(msg: string): void {
  status.textContent = msg;
}

async function mutate(fn: () => Promise<SessionState>): Promise<void> {
  if (busy || !state) return;
  busy = true;
  try {
    hint = null;
    await refresh(await fn());
  } catch (err) {
    if (err instanceof ServiceError) {
      toast(err.message);
      await refresh(await client.getState(state.id));
    } else {
      throw err;
    }
  } finally {
    busy = false;
  }
}

svg.addEventListener("click", (ev) => {
  if (!state || busy) return;
  const cell = cellFromEvent(state, ev);
  if (!cell) return;
  const chosen = moveForClick(highlights, cell);
  if (chosen) {
    void mutate(() => client.move(state!.id, chosen));
    return;
  }
  const sel = gourdAt(state.current, cell);
  if (sel && !(selection && selection.gourd === sel.gourd && sameCell(selection.cell, sel.cell))) {
    selection = sel;
    highlights = highlightsFor(state.current, moves, sel);
  } else {
    selection = null;
    highlights = [];
  }
  redraw();
});

document.querySelector("#scramble")?.addEventListener("click", () => {
  void mutate(() =>
    client.scramble(state!.id, 50, Math.floor(Math.random() * 1e9)),
  );
});

document.querySelector("#hint")?.addEventListener("click", async () => {
  if (!state || busy) return;
  try {
    const h = await client.hint(state.id);
    hint = h.move;
    if (hint) {
      const sel = gourdAt(state.current, hint.head);
      selection = sel;
      highlights = sel ? highlightsFor(state.current, moves, sel) : [];
      toast(`${h.remaining} moves to go if you follow the hints`);
    } else {
      toast("already solved");
    }
    redraw();
  } catch (err) {
    if (err instanceof ServiceError) toast(err.message);
    else throw err;
  }
});

async function boot(): Promise<void> {
  const board = await (await fetch("fixtures/photo.board")).text();
  const config = await (await fetch("fixtures/photo.config")).text();
  const s = await client.createSession({ board, config, target: config });
  await refresh(s);
}

void boot();
