/** Pure view-model logic: gourd selection and legal-move highlighting.
 *
 * Interaction is "grab a disc, click where it should go".  A highlight pairs
 * a legal move with the destination cell of the grabbed disc, so clicking a
 * highlighted cell identifies the move unambiguously; in particular a pivot
 * is only offered on the disc that swings (the move's head).
 */

import type { Cell, ConfigJson, GourdJson, Move, SessionState } from "./types.js";
import { cellKey, sameCell } from "./types.js";

export interface Selection {
  gourd: number;
  cell: Cell; // the grabbed disc
}

export interface Highlight {
  move: Move;
  cell: Cell; // where the grabbed disc ends up
}

export function gourdAt(config: ConfigJson, cell: Cell): Selection | null {
  for (let i = 0; i < config.gourds.length; i++) {
    const g = config.gourds[i]!;
    if (sameCell(g.a, cell) || sameCell(g.b, cell)) {
      return { gourd: i, cell };
    }
  }
  return null;
}

function owns(g: GourdJson, m: Move): boolean {
  return (
    (sameCell(g.a, m.tail) && sameCell(g.b, m.head)) ||
    (sameCell(g.b, m.tail) && sameCell(g.a, m.head))
  );
}

/** All legal moves of one gourd, regardless of which disc is grabbed. */
export function movesOfGourd(
  config: ConfigJson,
  moves: Move[],
  gourd: number,
): Move[] {
  const g = config.gourds[gourd]!;
  return moves.filter((m) => owns(g, m));
}

/** Legal destinations for the grabbed disc. */
export function highlightsFor(
  config: ConfigJson,
  moves: Move[],
  sel: Selection,
): Highlight[] {
  const out: Highlight[] = [];
  for (const m of movesOfGourd(config, moves, sel.gourd)) {
    if (sameCell(m.head, sel.cell)) {
      out.push({ move: m, cell: m.target });
    } else if (m.kind !== "pivot") {
      // slide/turn/sharp carry the rear disc into the head's old cell
      out.push({ move: m, cell: m.head });
    }
  }
  return out;
}

/** The move to send for a click, or null if the cell is not highlighted. */
export function moveForClick(highlights: Highlight[], cell: Cell): Move | null {
  const hits = highlights.filter((h) => sameCell(h.cell, cell));
  if (hits.length === 0) return null;
  // prefer the move where the grabbed disc is the swinging end
  const byHead = hits.find((h) => sameCell(h.move.target, cell));
  return (byHead ?? hits[0]!).move;
}

/** Per-cell label lookup for rendering the target overlay. */
export function targetLabels(state: SessionState): Map<string, string> {
  const out = new Map<string, string>();
  const t = state.target;
  if (t === null) return out;
  if ("config" in t) {
    for (const g of t.config.gourds) {
      out.set(cellKey(g.a), g.label_a);
      out.set(cellKey(g.b), g.label_b);
    }
  } else {
    for (const c of t.board.cells) {
      if (c.label !== ".") out.set(cellKey(c), c.label);
    }
  }
  return out;
}
