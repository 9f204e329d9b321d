/** Series geometry for the M_n-vs-time chart and run overlays.
 *
 * The server already down-samples long series; the chart draws exactly
 * the points it gets, with no smoothing, so sign changes stay visible.
 * The x axis is physical time (step index times dt), which keeps runs
 * with different step counts aligned.
 */

import type { ParamsUsed, Series } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

export interface Bounds {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

/** Overturning strength over time: x in seconds (steps * dt), y = M_n. */
export function seriesPoints(series: Series, params: ParamsUsed): Point[] {
  return series.steps.map((step, i) => ({ x: step * params.dt, y: series.M_n[i] ?? 0 }));
}

/** Joint bounds of several point sets; always includes y = 0. */
export function bounds(pointSets: Point[][]): Bounds {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = 0;
  let yMax = 0;
  for (const points of pointSets) {
    for (const p of points) {
      xMin = Math.min(xMin, p.x);
      xMax = Math.max(xMax, p.x);
      yMin = Math.min(yMin, p.y);
      yMax = Math.max(yMax, p.y);
    }
  }
  if (!Number.isFinite(xMin)) {
    xMin = 0;
    xMax = 1;
  }
  if (xMin === xMax) xMax = xMin + 1;
  if (yMin === yMax) yMax = yMin + 1;
  return { xMin, xMax, yMin, yMax };
}

function scaleX(x: number, b: Bounds, width: number): number {
  return ((x - b.xMin) / (b.xMax - b.xMin)) * width;
}

function scaleY(y: number, b: Bounds, height: number): number {
  return height - ((y - b.yMin) / (b.yMax - b.yMin)) * height;
}

/** SVG path ("M x y L x y ...") for one point set inside shared bounds. */
export function toSvgPath(points: Point[], b: Bounds, width: number, height: number): string {
  return points
    .map((p, i) => {
      const command = i === 0 ? "M" : "L";
      return `${command} ${scaleX(p.x, b, width).toFixed(2)} ${scaleY(p.y, b, height).toFixed(2)}`;
    })
    .join(" ");
}

/** Pixel row of the M_n = 0 line (collapse boundary). */
export function zeroLineY(b: Bounds, height: number): number {
  return scaleY(0, b, height);
}

/** True when the overturning strength changes sign anywhere in the run. */
export function crossesZero(values: number[]): boolean {
  const first = values[0];
  if (first === undefined) return false;
  return values.some((v) => Math.sign(v) !== Math.sign(first) && v !== 0);
}

export interface Overlay {
  bounds: Bounds;
  paths: string[];
  zeroY: number;
}

/** Shared-axis overlay of several runs sized to a drawing area. */
export function overlay(
  runs: { series: Series; params: ParamsUsed }[],
  width: number,
  height: number,
): Overlay {
  const pointSets = runs.map((run) => seriesPoints(run.series, run.params));
  const b = bounds(pointSets);
  return {
    bounds: b,
    paths: pointSets.map((points) => toSvgPath(points, b, width, height)),
    zeroY: zeroLineY(b, height),
  };
}
