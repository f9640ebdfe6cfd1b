import type { StrokePayload } from "../src/schema";

/** Replay a recorded stroke payload on a canvas as scripted pointer events. */
export function replayStrokes(canvas: HTMLCanvasElement, payload: StrokePayload): void {
  for (const stroke of payload) {
    dispatch(canvas, "pointerdown", stroke[0].x, stroke[0].y);
    for (const point of stroke.slice(1)) {
      dispatch(canvas, "pointermove", point.x, point.y);
    }
    dispatch(canvas, "pointerup", 0, 0);
  }
}

export function dispatch(
  target: EventTarget,
  type: string,
  x: number,
  y: number,
): void {
  // jsdom has no PointerEvent; a MouseEvent with the pointer event type
  // reaches the same listeners
  target.dispatchEvent(
    new MouseEvent(type, { clientX: x, clientY: y, bubbles: true }),
  );
}

export function drawSquare(canvas: HTMLCanvasElement): void {
  const pts = [
    [10, 10],
    [100, 10],
    [100, 100],
    [10, 100],
    [10, 10],
  ];
  dispatch(canvas, "pointerdown", pts[0][0], pts[0][1]);
  for (const [x, y] of pts.slice(1)) dispatch(canvas, "pointermove", x, y);
  dispatch(canvas, "pointerup", 0, 0);
}

export async function until(
  predicate: () => boolean,
  timeoutMs = 5000,
  stepMs = 10,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((r) => setTimeout(r, stepMs));
  }
  throw new Error("condition not met in time");
}
