/** Planar embedding of axial hex coordinates.
 *
 * A cell (q, r) sits at q * (1, 0) + r * (1/2, sqrt(3)/2) in abstract units;
 * neighboring centers are at distance 1, and cells render as flat-top
 * hexagons of circumradius 1/sqrt(3).
 */

import type { Cell } from "./types.js";

export const SQRT3 = Math.sqrt(3);

export interface Point {
  x: number;
  y: number;
}

export function center(c: Cell): Point {
  return { x: c.q + c.r / 2, y: (c.r * SQRT3) / 2 };
}

/** Circumradius of the hexagon drawn around each cell center. */
export const HEX_R = 1 / SQRT3;

/** Corners of the flat-top hexagon around a cell, clockwise. */
export function corners(c: Cell): Point[] {
  const { x, y } = center(c);
  const pts: Point[] = [];
  for (let i = 0; i < 6; i++) {
    const a = (Math.PI / 180) * (60 * i + 30);
    pts.push({ x: x + HEX_R * Math.cos(a), y: y + HEX_R * Math.sin(a) });
  }
  return pts;
}

export interface Layout {
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Scale and offset mapping abstract units into a width x height viewport. */
export function fitLayout(
  cells: Cell[],
  width: number,
  height: number,
  margin = 12,
): Layout {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const c of cells) {
    for (const p of corners(c)) {
      minX = Math.min(minX, p.x);
      maxX = Math.max(maxX, p.x);
      minY = Math.min(minY, p.y);
      maxY = Math.max(maxY, p.y);
    }
  }
  const scale = Math.min(
    (width - 2 * margin) / (maxX - minX),
    (height - 2 * margin) / (maxY - minY),
  );
  return {
    scale,
    offsetX: margin - minX * scale,
    offsetY: margin - minY * scale,
  };
}

export function toScreen(p: Point, l: Layout): Point {
  return { x: p.x * l.scale + l.offsetX, y: p.y * l.scale + l.offsetY };
}
