/** SVG rendering: flat-top hex cells, gourds as two discs joined by a neck,
 * the empty cell marked, selection/highlight/hint overlays. */

import { center, corners, fitLayout, toScreen, type Layout } from "./geometry.js";
import type { Highlight, Selection } from "./model.js";
import { targetLabels } from "./model.js";
import type { Cell, Move, SessionState } from "./types.js";
import { cellKey, sameCell } from "./types.js";

const NS = "http://www.w3.org/2000/svg";

const PALETTE: Record<string, string> = {
  c1: "#d64550",
  c2: "#4573d6",
  c3: "#45b05c",
  c4: "#d6a045",
  c0: "#8452b0",
};

function colorOf(label: string): string {
  return PALETTE[label] ?? "#666";
}

function el(name: string, attrs: Record<string, string>): SVGElement {
  const e = document.createElementNS(NS, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  return e;
}

export interface Scene {
  state: SessionState;
  selection: Selection | null;
  highlights: Highlight[];
  hint: Move | null;
}

export function render(svg: SVGSVGElement, scene: Scene): void {
  const { state, selection, highlights, hint } = scene;
  const width = svg.clientWidth || 640;
  const height = svg.clientHeight || 640;
  const layout = fitLayout(state.board.cells, width, height);
  const discR = 0.32 * layout.scale;
  const targets = targetLabels(state);

  svg.replaceChildren();

  for (const c of state.board.cells) {
    const pts = corners(c)
      .map((p) => toScreen(p, layout))
      .map((p) => `${p.x},${p.y}`)
      .join(" ");
    const want = targets.get(cellKey(c));
    svg.appendChild(
      el("polygon", {
        points: pts,
        fill: want ? colorOf(want) : "#f4f1ea",
        "fill-opacity": want ? "0.25" : "1",
        stroke: "#b0a890",
        "stroke-width": "1",
        "data-cell": cellKey(c),
        class: "cell",
      }),
    );
  }

  const e = toScreen(center(state.current.empty), layout);
  svg.appendChild(
    el("circle", {
      cx: `${e.x}`,
      cy: `${e.y}`,
      r: `${discR * 0.5}`,
      fill: "none",
      stroke: "#b0a890",
      "stroke-dasharray": "3 3",
      class: "empty-marker",
    }),
  );

  state.current.gourds.forEach((g, i) => {
    const a = toScreen(center(g.a), layout);
    const b = toScreen(center(g.b), layout);
    const grp = el("g", { class: "gourd", "data-gourd": `${i}` });
    grp.appendChild(
      el("line", {
        x1: `${a.x}`,
        y1: `${a.y}`,
        x2: `${b.x}`,
        y2: `${b.y}`,
        stroke: "#3a352c",
        "stroke-width": `${discR * 0.8}`,
        "stroke-linecap": "round",
        class: "neck",
      }),
    );
    for (const [end, p, label] of [
      ["a", a, g.label_a],
      ["b", b, g.label_b],
    ] as const) {
      const selected =
        selection !== null &&
        selection.gourd === i &&
        sameCell(selection.cell, end === "a" ? g.a : g.b);
      grp.appendChild(
        el("circle", {
          cx: `${p.x}`,
          cy: `${p.y}`,
          r: `${discR}`,
          fill: colorOf(label),
          stroke: selected ? "#111" : "#3a352c",
          "stroke-width": selected ? "3" : "1.5",
          "data-gourd": `${i}`,
          "data-end": end,
          class: selected ? "disc selected" : "disc",
        }),
      );
    }
    svg.appendChild(grp);
  });

  for (const h of highlights) {
    const p = toScreen(center(h.cell), layout);
    const isHint = hint !== null && movesEqual(h.move, hint);
    const dot = el("circle", {
      cx: `${p.x}`,
      cy: `${p.y}`,
      r: `${discR * 0.45}`,
      fill: isHint ? "#e8b931" : "#3a9",
      "fill-opacity": "0.85",
      "data-cell": cellKey(h.cell),
      class: isHint ? "highlight hint" : "highlight",
    });
    if (isHint) {
      const pulse = el("animate", {
        attributeName: "r",
        values: `${discR * 0.35};${discR * 0.6};${discR * 0.35}`,
        dur: "1s",
        repeatCount: "indefinite",
      });
      dot.appendChild(pulse);
    }
    svg.appendChild(dot);
  }

  if (hint !== null && highlights.every((h) => !movesEqual(h.move, hint))) {
    // hint for an unselected gourd: pulse its swinging disc
    const p = toScreen(center(hint.head), layout);
    const ring = el("circle", {
      cx: `${p.x}`,
      cy: `${p.y}`,
      r: `${discR * 1.2}`,
      fill: "none",
      stroke: "#e8b931",
      "stroke-width": "3",
      class: "hint",
    });
    ring.appendChild(
      el("animate", {
        attributeName: "stroke-opacity",
        values: "1;0.2;1",
        dur: "1s",
        repeatCount: "indefinite",
      }),
    );
    svg.appendChild(ring);
  }
}

function movesEqual(a: Move, b: Move): boolean {
  return (
    sameCell(a.tail, b.tail) &&
    sameCell(a.head, b.head) &&
    sameCell(a.target, b.target) &&
    a.kind === b.kind
  );
}

export function cellFromEvent(
  state: SessionState,
  ev: MouseEvent,
): Cell | null {
  const t = ev.target as Element | null;
  const key = t?.getAttribute("data-cell");
  if (!key) return null;
  const [q, r] = key.split(",").map(Number);
  return { q: q!, r: r! };
}
