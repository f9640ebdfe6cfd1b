/**
 * Pointer-trail capture: one stroke per pointerdown -> pointerup gesture,
 * accumulating until cleared. Taps that produce fewer than two points are
 * discarded. Timestamps are milliseconds since the first point of the
 * current drawing.
 */

import type { StrokePayload, StrokePoint } from "./schema";

export class StrokeCapture {
  private strokes: StrokePoint[][] = [];
  private current: StrokePoint[] | null = null;
  private t0: number | null = null;
  private onStrokeEndCallbacks: Array<() => void> = [];

  attach(canvas: HTMLCanvasElement): void {
    canvas.addEventListener("pointerdown", (ev) => this.begin(ev, canvas));
    canvas.addEventListener("pointermove", (ev) => this.extend(ev, canvas));
    canvas.addEventListener("pointerup", () => this.end());
    canvas.addEventListener("pointerleave", () => this.end());
  }

  onStrokeEnd(cb: () => void): void {
    this.onStrokeEndCallbacks.push(cb);
  }

  private point(ev: MouseEvent, canvas: HTMLCanvasElement): StrokePoint {
    const rect = canvas.getBoundingClientRect();
    if (this.t0 === null) {
      this.t0 = performance.now();
    }
    return {
      x: ev.clientX - rect.left,
      y: ev.clientY - rect.top,
      t: performance.now() - this.t0,
    };
  }

  private begin(ev: MouseEvent, canvas: HTMLCanvasElement): void {
    this.current = [this.point(ev, canvas)];
  }

  private extend(ev: MouseEvent, canvas: HTMLCanvasElement): void {
    if (this.current === null) return;
    this.current.push(this.point(ev, canvas));
  }

  private end(): void {
    if (this.current === null) return;
    const finished = this.current;
    this.current = null;
    if (finished.length < 2) return; // tap, not a stroke
    this.strokes.push(finished);
    for (const cb of this.onStrokeEndCallbacks) cb();
  }

  /** Strokes drawn so far, as the wire payload. */
  payload(): StrokePayload {
    return this.strokes.map((s) => s.map((p) => ({ ...p })));
  }

  isEmpty(): boolean {
    return this.strokes.length === 0;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
    this.t0 = null;
  }
}
