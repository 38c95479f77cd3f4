import { describe, expect, it } from "vitest";

import { center, corners, fitLayout, HEX_R, SQRT3, toScreen } from "../src/geometry.js";

describe("hex embedding", () => {
  it("places axial neighbors at unit distance", () => {
    const origin = center({ q: 0, r: 0 });
    const offsets = [
      [1, 0],
      [-1, 0],
      [0, 1],
      [0, -1],
      [1, -1],
      [-1, 1],
    ];
    for (const [q, r] of offsets) {
      const p = center({ q: q!, r: r! });
      const d = Math.hypot(p.x - origin.x, p.y - origin.y);
      expect(d).toBeCloseTo(1, 12);
    }
  });

  it("puts (0,1) at (1/2, sqrt3/2)", () => {
    const p = center({ q: 0, r: 1 });
    expect(p.x).toBeCloseTo(0.5, 12);
    expect(p.y).toBeCloseTo(SQRT3 / 2, 12);
  });

  it("draws hexagons whose corners are at the circumradius", () => {
    const pts = corners({ q: 2, r: -1 });
    const c = center({ q: 2, r: -1 });
    expect(pts).toHaveLength(6);
    for (const p of pts) {
      expect(Math.hypot(p.x - c.x, p.y - c.y)).toBeCloseTo(HEX_R, 12);
    }
  });

  it("adjacent hexagons share exactly two corners", () => {
    const a = corners({ q: 0, r: 0 });
    const b = corners({ q: 1, r: 0 });
    let shared = 0;
    for (const p of a) {
      for (const q of b) {
        if (Math.hypot(p.x - q.x, p.y - q.y) < 1e-9) shared++;
      }
    }
    expect(shared).toBe(2);
  });

  it("fits the board inside the viewport with a margin", () => {
    const cells = [
      { q: 0, r: 0 },
      { q: 3, r: 0 },
      { q: 0, r: 3 },
      { q: -2, r: 1 },
    ];
    const layout = fitLayout(cells, 640, 480, 10);
    for (const c of cells) {
      for (const p of corners(c)) {
        const s = toScreen(p, layout);
        expect(s.x).toBeGreaterThanOrEqual(10 - 1e-9);
        expect(s.y).toBeGreaterThanOrEqual(10 - 1e-9);
        expect(s.x).toBeLessThanOrEqual(630 + 1e-9);
        expect(s.y).toBeLessThanOrEqual(470 + 1e-9);
      }
    }
  });
});
