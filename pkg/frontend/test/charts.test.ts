import { describe, expect, it } from "vitest";

import { domainOf, islandColor, linePath, scale, scatterCircles } from "../src/charts.js";

describe("domainOf", () => {
  it("pads the raw extent", () => {
    const d = domainOf([0, 10], 0.1);
    expect(d.min).toBeCloseTo(-1);
    expect(d.max).toBeCloseTo(11);
  });

  it("widens a degenerate domain", () => {
    const d = domainOf([3, 3]);
    expect(d.max).toBeGreaterThan(d.min);
  });

  it("falls back to the unit domain when empty", () => {
    expect(domainOf([])).toEqual({ min: 0, max: 1 });
  });
});

describe("scale and paths", () => {
  it("maps the domain ends to the pixel range", () => {
    const d = { min: 0, max: 10 };
    expect(scale(0, d, 100)).toBe(0);
    expect(scale(10, d, 100)).toBe(100);
    expect(scale(0, d, 100, true)).toBe(100); // flipped y axis
  });

  it("builds a move-then-line path", () => {
    const path = linePath(
      [{ x: 0, y: 0 }, { x: 1, y: 1 }],
      100,
      100,
      { min: 0, max: 1 },
      { min: 0, max: 1 },
    );
    expect(path).toBe("M0.00 100.00 L100.00 0.00");
  });

  it("returns an empty path for no points", () => {
    expect(linePath([], 10, 10, { min: 0, max: 1 }, { min: 0, max: 1 })).toBe("");
  });

  it("produces one circle per scatter point", () => {
    const circles = scatterCircles(
      [{ x: 0.5, y: 0.5 }],
      200,
      100,
      { min: 0, max: 1 },
      { min: 0, max: 1 },
    );
    expect(circles).toEqual([{ cx: 100, cy: 50 }]);
  });
});

describe("islandColor", () => {
  it("cycles deterministic colors", () => {
    expect(islandColor(0)).toBe(islandColor(8));
    expect(islandColor(1)).not.toBe(islandColor(2));
  });
});
