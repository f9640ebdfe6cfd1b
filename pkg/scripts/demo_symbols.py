"""Synthetic handwriting-like symbol generator.

Each symbol class is a random smooth heading profile; examples of a class
re-draw the same profile under a random monotone time warp, point jitter and
speed changes, which is exactly the kind of variation an elastic distance is
supposed to absorb. Used to build demo models and to exercise the sketch
pipeline when the real training data is not available.
"""

from __future__ import annotations

import json

import numpy as np


def _heading_profile(class_seed: int, harmonics: int = 4):
    rng = np.random.default_rng(9000 + class_seed)
    a = rng.normal(0.0, 1.2, harmonics)
    b = rng.normal(0.0, 1.2, harmonics)
    phase = rng.uniform(0, 2 * np.pi)

    def theta(u: np.ndarray) -> np.ndarray:
        out = np.full_like(u, phase)
        for k in range(harmonics):
            out = out + a[k] * np.cos(2 * np.pi * (k + 1) * u)
            out = out + b[k] * np.sin(2 * np.pi * (k + 1) * u)
        return out

    return theta


def _monotone_warp(rng: np.random.Generator, n_knots: int = 3):
    xs = np.concatenate(([0.0], np.sort(rng.random(n_knots)), [1.0]))
    ys = np.concatenate(([0.0], np.sort(rng.random(n_knots)), [1.0]))

    def warp(u: np.ndarray) -> np.ndarray:
        return np.interp(u, xs, ys)

    return warp


def make_symbol_strokes(class_id: int, example_id: int, n_points: int = 48,
                        jitter: float = 0.015) -> list[list[dict]]:
    """One drawing of symbol `class_id`, as stroke JSON (list of strokes)."""
    theta = _heading_profile(class_id)
    rng = np.random.default_rng((class_id + 1) * 100003 + example_id)
    warp = _monotone_warp(rng)
    u = warp(np.linspace(0.0, 1.0, n_points))
    headings = theta(u) + rng.normal(0.0, 0.05, n_points)
    step = 1.0 + 0.3 * rng.random(n_points)
    x = np.concatenate(([0.0], np.cumsum(step * np.cos(headings))))
    y = np.concatenate(([0.0], np.cumsum(step * np.sin(headings))))
    span = max(x.max() - x.min(), y.max() - y.min(), 1e-9)
    x = (x - x.min()) / span * 200.0 + rng.uniform(0, 30)
    y = (y - y.min()) / span * 200.0 + rng.uniform(0, 30)
    x = x + rng.normal(0.0, jitter * 200.0, x.shape[0])
    y = y + rng.normal(0.0, jitter * 200.0, y.shape[0])
    dt = 8.0 + 10.0 * rng.random(x.shape[0])
    t = np.cumsum(dt) * rng.uniform(0.5, 2.0)
    return [
        [
            {"x": float(xi), "y": float(yi), "t": float(ti)}
            for xi, yi, ti in zip(x, y, t)
        ]
    ]


def symbol_name(class_id: int) -> str:
    names = [
        r"\alpha", r"\beta", r"\gamma", r"\delta", r"\epsilon", r"\zeta",
        r"\eta", r"\theta", r"\iota", r"\kappa", r"\lambda", r"\mu", r"\nu",
        r"\xi", r"\pi", r"\rho", r"\sigma", r"\tau", r"\phi", r"\omega",
    ]
    return names[class_id] if class_id < len(names) else f"\\sym{class_id}"


def write_dataset_json(path, n_classes: int = 20, per_class: int = 50) -> None:
    """Stroke records in the layout detexify-prepare consumes."""
    records = []
    for c in range(n_classes):
        for e in range(per_class):
            records.append(
                {"label": symbol_name(c), "strokes": make_symbol_strokes(c, e)}
            )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(records, fh)
