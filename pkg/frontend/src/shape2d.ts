import type { FieldPayload } from './types';

const FRAME_MS = 40;

/**
 * Animated flexible-link shape: one polyline of server values per cached
 * time sample. Playback is client-side over the cached frames, so replay
 * never refetches. Painting degrades to frame bookkeeping where the canvas
 * has no 2-D context (headless test DOM).
 */
export class ShapeAnimator {
  currentFrame = 0;
  private timer: ReturnType<typeof setInterval> | null = null;
  private valueMin: number;
  private valueMax: number;

  constructor(
    private canvas: HTMLCanvasElement,
    private data: FieldPayload,
    private onFrame?: (frame: number) => void,
  ) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const row of data.values) {
      for (const v of row) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
    if (!Number.isFinite(lo) || lo === hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    this.valueMin = lo;
    this.valueMax = hi;
    this.drawFrame(0);
  }

  frameCount(): number {
    return this.data.values.length;
  }

  get playing(): boolean {
    return this.timer !== null;
  }

  drawFrame(index: number): void {
    this.currentFrame = Math.min(Math.max(index, 0), this.frameCount() - 1);
    this.paint();
    this.onFrame?.(this.currentFrame);
  }

  play(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => {
      if (this.currentFrame + 1 >= this.frameCount()) {
        this.stop();
        return;
      }
      this.drawFrame(this.currentFrame + 1);
    }, FRAME_MS);
  }

  /** Restart the cached run from its first frame. */
  replay(): void {
    this.stop();
    this.drawFrame(0);
    this.play();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private paint(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const { width, height } = this.canvas;
    const { x, t, values } = this.data;
    const row = values[this.currentFrame];
    const spanX = x[x.length - 1] - x[0] || 1;
    const spanV = this.valueMax - this.valueMin;
    const margin = 0.1 * Math.min(width, height);

    ctx.clearRect(0, 0, width, height);
    ctx.strokeStyle = '#bbb';
    ctx.beginPath();
    const zeroY = height - margin - ((0 - this.valueMin) / spanV) * (height - 2 * margin);
    ctx.moveTo(margin, zeroY);
    ctx.lineTo(width - margin, zeroY);
    ctx.stroke();

    ctx.strokeStyle = '#1565c0';
    ctx.lineWidth = 2;
    ctx.beginPath();
    row.forEach((v, i) => {
      const sx = margin + ((x[i] - x[0]) / spanX) * (width - 2 * margin);
      const sy = height - margin - ((v - this.valueMin) / spanV) * (height - 2 * margin);
      if (i === 0) ctx.moveTo(sx, sy);
      else ctx.lineTo(sx, sy);
    });
    ctx.stroke();

    ctx.fillStyle = '#333';
    ctx.font = '12px sans-serif';
    ctx.fillText(`t = ${t[this.currentFrame].toFixed(3)} s`, margin, margin);
    ctx.lineWidth = 1;
  }
}
