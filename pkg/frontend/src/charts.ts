/** Dependency-free SVG chart geometry, kept pure so tests can assert on it. */

export interface XY {
  x: number;
  y: number;
}

export interface Domain {
  min: number;
  max: number;
}

export function domainOf(values: number[], pad = 0.05): Domain {
  if (values.length === 0) return { min: 0, max: 1 };
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  return { min: min - pad * span, max: max + pad * span };
}

export function scale(v: number, d: Domain, pixels: number, flip = false): number {
  const t = (v - d.min) / (d.max - d.min);
  return flip ? pixels * (1 - t) : pixels * t;
}

/** SVG path ("M x y L x y ...") for a polyline in chart coordinates. */
export function linePath(
  points: XY[],
  width: number,
  height: number,
  xDomain: Domain,
  yDomain: Domain,
): string {
  if (points.length === 0) return "";
  return points
    .map((p, i) => {
      const x = scale(p.x, xDomain, width).toFixed(2);
      const y = scale(p.y, yDomain, height, true).toFixed(2);
      return `${i === 0 ? "M" : "L"}${x} ${y}`;
    })
    .join(" ");
}

export function scatterCircles(
  points: XY[],
  width: number,
  height: number,
  xDomain: Domain,
  yDomain: Domain,
): { cx: number; cy: number }[] {
  return points.map((p) => ({
    cx: Number(scale(p.x, xDomain, width).toFixed(2)),
    cy: Number(scale(p.y, yDomain, height, true).toFixed(2)),
  }));
}

export const ISLAND_COLORS = [
  "#2563eb",
  "#dc2626",
  "#16a34a",
  "#9333ea",
  "#ea580c",
  "#0891b2",
  "#ca8a04",
  "#db2777",
];

export function islandColor(islandId: number): string {
  return ISLAND_COLORS[islandId % ISLAND_COLORS.length] ?? "#111";
}
