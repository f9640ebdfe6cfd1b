/**
 * The wire format the classification service accepts: an array of strokes,
 * each an array of {x, y, t} point objects. Validation mirrors the service's
 * own checks so a payload that passes here is accepted on the other side.
 */

export interface StrokePoint {
  x: number;
  y: number;
  t: number;
}

export type StrokePayload = StrokePoint[][];

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Returns a list of problems; an empty list means the payload is valid. */
export function validateStrokePayload(payload: unknown): string[] {
  const errors: string[] = [];
  if (!Array.isArray(payload)) {
    return ["payload must be an array of strokes"];
  }
  if (payload.length === 0) {
    errors.push("payload must contain at least one stroke");
  }
  payload.forEach((stroke, s) => {
    if (!Array.isArray(stroke)) {
      errors.push(`stroke ${s} must be an array of points`);
      return;
    }
    if (stroke.length < 2) {
      errors.push(`stroke ${s} needs at least 2 points`);
    }
    let prevT = -Infinity;
    stroke.forEach((p, i) => {
      if (typeof p !== "object" || p === null) {
        errors.push(`stroke ${s} point ${i} must be an object`);
        return;
      }
      for (const field of ["x", "y", "t"] as const) {
        if (!isFiniteNumber((p as Record<string, unknown>)[field])) {
          errors.push(`stroke ${s} point ${i} field "${field}" must be a finite number`);
        }
      }
      const t = (p as StrokePoint).t;
      if (isFiniteNumber(t)) {
        if (t < prevT) {
          errors.push(`stroke ${s} point ${i} timestamp decreases`);
        }
        prevT = t;
      }
    });
  });
  return errors;
}
