"""Exact elastic distance kernels and lower-bound machinery.

DTW follows the squared-cost recurrence and returns the square root of the
accumulated cost, so DTW, Euclidean distance and the subspace aggregation
formulas are all on the same scale. Windows are Sakoe-Chiba bands given as
an integer half-width in samples; None means unconstrained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .series import as_series

Window = int | None


def effective_radius(window: Window, n: int, m: int) -> int:
    """Clamp a window to the usable band half-width for lengths n, m."""
    full = max(n, m)
    if window is None:
        return full
    if window < 0:
        raise ValueError(f"window radius must be >= 0, got {window}")
    return min(int(window), full - 1)


def window_from_percent(percent: float, length: int) -> int:
    """cDTW5-style percentage window: radius = ceil(p * length)."""
    if percent < 0:
        raise ValueError("window percentage must be >= 0")
    return int(math.ceil(percent * length))


@dataclass(frozen=True)
class Envelope:
    """Per-point min/max band of a series within a warping radius."""

    upper: np.ndarray
    lower: np.ndarray
    radius: Window

    def __len__(self) -> int:
        return self.upper.shape[0]


def euclidean(a, b) -> float:
    a = as_series(a)
    b = as_series(b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return math.sqrt(_kernels.sq_euclidean(a, b))


def dtw(a, b, window: Window = None, upper_bound: float | None = None) -> float:
    """Windowed DTW distance, optionally pruned against an upper bound.

    When `upper_bound` is given and pruning proves the true distance exceeds
    it, returns inf (strictly greater than any finite bound) instead of the
    exact value. With upper_bound None/inf the result is always exact.
    """
    a = as_series(a)
    b = as_series(b)
    n, m = a.shape[0], b.shape[0]
    if window is not None and abs(n - m) > window:
        raise ValueError(
            f"no admissible warping path: length difference {abs(n - m)} "
            f"exceeds window radius {window}"
        )
    radius = effective_radius(window, n, m)
    if upper_bound is None:
        ub_sq = np.inf
    else:
        if upper_bound < 0:
            raise ValueError("upper_bound must be >= 0")
        ub_sq = float(upper_bound) ** 2
    d_sq = _kernels.dtw_sq(a, b, radius, ub_sq)
    return math.sqrt(d_sq) if d_sq != np.inf else math.inf


def keogh_envelope(s, window: Window = None) -> Envelope:
    s = as_series(s)
    radius = effective_radius(window, s.shape[0], s.shape[0])
    upper, lower = _kernels.envelope(s, radius)
    return Envelope(upper=upper, lower=lower, radius=window)


def lb_keogh(query, env: Envelope) -> float:
    """LB_Keogh of a raw query against a pre-built envelope.

    Lower-bounds the windowed DTW between the query and the envelope's
    source series, for the same window the envelope was built with.
    """
    query = as_series(query)
    if query.shape[0] != len(env):
        raise ValueError(f"length mismatch: {query.shape[0]} vs {len(env)}")
    return math.sqrt(_kernels.lb_keogh_sq(query, env.upper, env.lower))


def lb_kim(a, b) -> float:
    """First/last-point lower bound; endpoint pairs are aligned in any path."""
    a = as_series(a)
    b = as_series(b)
    return math.sqrt(_kernels.lb_kim_sq(a, b))


def nn_search_cascaded(query, candidates, window: Window = None) -> tuple[int, float]:
    """Exact nearest neighbour under windowed DTW over (series, Envelope)
    pairs, pruned with the lb_kim -> lb_keogh -> bounded-DTW cascade.

    Returns (index, distance); identical to an unpruned linear scan with
    ties broken by lowest index.
    """
    if len(candidates) == 0:
        raise ValueError("candidate list is empty")
    query = as_series(query)
    cands = np.stack([as_series(c) for c, _ in candidates])
    uppers = np.stack([env.upper for _, env in candidates])
    lowers = np.stack([env.lower for _, env in candidates])
    if cands.shape[1] != query.shape[0]:
        raise ValueError("candidates must have the same length as the query")
    radius = effective_radius(window, query.shape[0], cands.shape[1])
    for _, env in candidates:
        if effective_radius(env.radius, len(env), len(env)) != radius:
            raise ValueError(
                "envelope was built for a different window; the lower bound "
                "would not be sound"
            )
    idx, d_sq = _kernels.nn_cascade(query, cands, uppers, lowers, radius)
    return int(idx), math.sqrt(d_sq)
