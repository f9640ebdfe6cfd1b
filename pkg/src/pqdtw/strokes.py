"""Sketch preprocessing: turn 2D pen trajectories into normalized 1D angle
series the quantized classifier can consume.

A symbol may consist of several strokes; they are concatenated in drawing
order, smoothed, redistributed to evenly spaced points along the arc, and
converted to unwrapped heading angles. Angles are invariant to translation
and uniform scaling, and timestamps only order strokes, so redrawing speed
never changes the output. Rotation is deliberately not normalized: symbol
identity is rotation-sensitive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

DEFAULT_RESAMPLE = 33


class DegenerateStrokeError(ValueError):
    """The stroke has no spatial extent (all points coincide)."""


@dataclass(frozen=True)
class Stroke:
    """Ordered pen trajectory: x, y in arbitrary spatial units, t in ms."""

    x: np.ndarray
    y: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        t = np.asarray(self.t, dtype=np.float64)
        if not (x.shape == y.shape == t.shape) or x.ndim != 1:
            raise ValueError("x, y, t must be 1-D arrays of equal length")
        if x.shape[0] < 2:
            raise ValueError(f"stroke needs >= 2 points, got {x.shape[0]}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(t))):
            raise ValueError("stroke contains NaN or Inf")
        if np.any(np.diff(t) < 0):
            raise ValueError("timestamps must be non-decreasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)

    def __len__(self) -> int:
        return self.x.shape[0]

    def arc_length(self) -> float:
        return float(np.hypot(np.diff(self.x), np.diff(self.y)).sum())


def stroke_from_json(points) -> Stroke:
    """One stroke from a list of {"x": number, "y": number, "t": number} objects."""
    if not isinstance(points, list):
        raise ValueError("stroke must be a JSON array of point objects")
    try:
        xs = [float(p["x"]) for p in points]
        ys = [float(p["y"]) for p in points]
        ts = [float(p["t"]) for p in points]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"stroke point missing field: {exc}") from exc
    return Stroke(np.array(xs), np.array(ys), np.array(ts))


def strokes_from_json(payload) -> list[Stroke]:
    """Parse the wire format: an array of strokes, each an array of points."""
    if isinstance(payload, (str, bytes)):
        payload = json.loads(payload)
    if not isinstance(payload, list) or not payload:
        raise ValueError("payload must be a non-empty JSON array of strokes")
    return [stroke_from_json(s) for s in payload]


def smooth(stroke: Stroke) -> Stroke:
    """Replace each interior point with the mean of itself and its two
    neighbours; endpoints stay fixed."""
    if len(stroke) <= 2:
        return stroke
    x = stroke.x.copy()
    y = stroke.y.copy()
    x[1:-1] = (stroke.x[:-2] + stroke.x[1:-1] + stroke.x[2:]) / 3.0
    y[1:-1] = (stroke.y[:-2] + stroke.y[1:-1] + stroke.y[2:]) / 3.0
    return Stroke(x, y, stroke.t)


def redistribute(stroke: Stroke, n_points: int) -> Stroke:
    """Resample to `n_points` equally spaced along the polyline's arc length.

    Start and end points are preserved exactly.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    seg = np.hypot(np.diff(stroke.x), np.diff(stroke.y))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = cum[-1]
    if total <= 0.0:
        raise DegenerateStrokeError("stroke has zero arc length")
    targets = np.linspace(0.0, total, n_points)
    return Stroke(
        np.interp(targets, cum, stroke.x),
        np.interp(targets, cum, stroke.y),
        np.interp(targets, cum, stroke.t),
    )


def to_angles(stroke: Stroke) -> np.ndarray:
    """Per-segment heading angles atan2(dy, dx), unwrapped so consecutive
    values never jump by 2 pi.

    Exactly coincident consecutive points give no direction of their own;
    their slot carries the neighbouring segment's angle instead of an
    undefined atan2(0, 0).
    """
    dx = np.diff(stroke.x)
    dy = np.diff(stroke.y)
    moving = (dx != 0.0) | (dy != 0.0)
    if not np.any(moving):
        raise DegenerateStrokeError("all stroke points coincide")
    angles = np.arctan2(dy, dx)
    if not np.all(moving):
        idx = np.where(moving, np.arange(angles.shape[0]), -1)
        np.maximum.accumulate(idx, out=idx)
        first = int(np.argmax(moving))
        idx[idx < 0] = first
        angles = angles[idx]
    return np.unwrap(angles)


def preprocess(strokes: list[Stroke], n_points: int = DEFAULT_RESAMPLE) -> np.ndarray:
    """Full pipeline: order by start time, concatenate, smooth, redistribute,
    convert to an unwrapped angle series of length n_points - 1."""
    usable = [s for s in strokes if s.arc_length() > 0.0]
    if not usable:
        raise DegenerateStrokeError("no stroke with spatial extent")
    usable.sort(key=lambda s: float(s.t[0]))
    x = np.concatenate([s.x for s in usable])
    y = np.concatenate([s.y for s in usable])
    # timestamps have served their purpose (stroke ordering); re-stamp so the
    # concatenated trajectory is monotone even for overlapping stroke clocks
    merged = Stroke(x, y, np.arange(x.shape[0], dtype=np.float64))
    return to_angles(redistribute(smooth(merged), n_points))
