import type { FieldPayload } from './types';

export interface Quad {
  points: [number, number][];
  depth: number;
  fill: string;
}

export interface SurfaceGeometry {
  quads: Quad[];
  valueMin: number;
  valueMax: number;
}

const clamp01 = (v: number): number => Math.min(1, Math.max(0, v));

/** Cold-to-hot fill for a normalized value. */
export const colorFor = (normalized: number): string => {
  const v = clamp01(normalized);
  const hue = 240 - 240 * v; // blue at the minimum, red at the maximum
  return `hsl(${hue.toFixed(0)}, 70%, 55%)`;
};

/**
 * Project the displacement grid onto screen quads, painter-sorted far to
 * near. Pure geometry: the renderer just fills the result, so every plotted
 * vertex comes straight from server values.
 */
export function projectSurface(
  data: FieldPayload,
  width: number,
  height: number,
): SurfaceGeometry {
  const { x, t, values } = data;
  let valueMin = Infinity;
  let valueMax = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < valueMin) valueMin = v;
      if (v > valueMax) valueMax = v;
    }
  }
  if (!Number.isFinite(valueMin) || valueMin === valueMax) {
    valueMin -= 0.5;
    valueMax += 0.5;
  }
  const spanX = x[x.length - 1] - x[0] || 1;
  const spanT = t[t.length - 1] - t[0] || 1;
  const spanV = valueMax - valueMin;

  // oblique projection: space to the right, time into the upper-right,
  // displacement straight up
  const margin = 0.08 * Math.min(width, height);
  const usableW = width - 2 * margin;
  const usableH = height - 2 * margin;
  const depthX = 0.35 * usableW;
  const depthY = 0.35 * usableH;
  const project = (xi: number, ti: number, vi: number): [number, number] => {
    const xn = (xi - x[0]) / spanX;
    const tn = (ti - t[0]) / spanT;
    const vn = (vi - valueMin) / spanV;
    const sx = margin + xn * (usableW - depthX) + tn * depthX;
    const sy = height - margin - vn * (usableH - depthY) - tn * depthY;
    return [sx, sy];
  };

  const quads: Quad[] = [];
  for (let j = 0; j < t.length - 1; j++) {
    for (let i = 0; i < x.length - 1; i++) {
      const corners: [number, number][] = [
        project(x[i], t[j], values[j][i]),
        project(x[i + 1], t[j], values[j][i + 1]),
        project(x[i + 1], t[j + 1], values[j + 1][i + 1]),
        project(x[i], t[j + 1], values[j + 1][i]),
      ];
      const mean =
        (values[j][i] + values[j][i + 1] + values[j + 1][i + 1] + values[j + 1][i]) / 4;
      quads.push({
        points: corners,
        depth: j + i / x.length,
        fill: colorFor((mean - valueMin) / spanV),
      });
    }
  }
  quads.sort((a, b) => b.depth - a.depth); // far time slices first
  return { quads, valueMin, valueMax };
}

/** Paint the projected surface; safe to call where no 2-D context exists
 * (headless test DOM), in which case only the geometry is computed. */
export function drawSurface(canvas: HTMLCanvasElement, data: FieldPayload): SurfaceGeometry {
  const geometry = projectSurface(data, canvas.width, canvas.height);
  const ctx = canvas.getContext('2d');
  if (ctx) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const quad of geometry.quads) {
      ctx.beginPath();
      ctx.moveTo(quad.points[0][0], quad.points[0][1]);
      for (const [px, py] of quad.points.slice(1)) ctx.lineTo(px, py);
      ctx.closePath();
      ctx.fillStyle = quad.fill;
      ctx.fill();
      ctx.strokeStyle = 'rgba(30, 30, 30, 0.25)';
      ctx.stroke();
    }
  }
  return geometry;
}
