"""Structure-aware segmentation into a fixed number of subspaces.

Haar MODWT scale coefficients act as a circular moving average of the input;
the points where the series crosses its own smoothed version mark structure
boundaries. Each fixed split point m*l may move backwards by at most `tail`
samples onto the nearest such boundary, so every series still yields exactly
the same number of segments, which are then re-interpolated to a common
length l + tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import as_series, resample_linear

DEFAULT_WAVELET_LEVEL = 3


@dataclass(frozen=True)
class SegmentPlan:
    """Cut points for one series: M segments covering [0, D) without gaps."""

    cut_points: tuple[int, ...]
    n_segments: int
    base_length: int
    tail: int
    wavelet_level: int
    series_length: int

    def __post_init__(self):
        if len(self.cut_points) != self.n_segments - 1:
            raise ValueError("plan must have exactly n_segments - 1 cut points")
        prev = 0
        for cut in self.cut_points:
            if not prev < cut < self.series_length:
                raise ValueError(f"cut points not strictly increasing: {self.cut_points}")
            prev = cut

    @property
    def segment_length(self) -> int:
        """Common length segments are re-interpolated to."""
        return self.base_length + self.tail

    def bounds(self) -> list[tuple[int, int]]:
        edges = (0, *self.cut_points, self.series_length)
        return list(zip(edges[:-1], edges[1:]))


def modwt_scale(s, level: int) -> np.ndarray:
    """Haar MODWT scale coefficients, rows 1..level, circular boundary.

    Level 1 is the pairwise mean (s_i + s_{i-1}) / 2; each further level
    repeats the averaging with doubled stride, so row j equals a circular
    moving average of window 2^j. Row length always matches the input.
    """
    s = as_series(s)
    if level < 1:
        raise ValueError(f"wavelet level must be >= 1, got {level}")
    d = s.shape[0]
    if 2**level > d:
        raise ValueError(f"2^level = {2 ** level} exceeds series length {d}")
    coeffs = np.empty((level, d))
    prev = s
    for j in range(level):
        prev = 0.5 * (prev + np.roll(prev, 2**j))
        coeffs[j] = prev
    return coeffs


def segment_points(s, coeffs: np.ndarray, level: int | None = None) -> np.ndarray:
    """Indices where sign(s - smoothed) flips, smoothing at the given level.

    Exact zero differences carry the previous nonzero sign, so flat regions
    do not produce spurious double crossings. A constant series yields no
    points at all.
    """
    s = as_series(s)
    row = coeffs[-1] if level is None else coeffs[level - 1]
    diff = s - row
    points = []
    prev_sign = 0
    for i in range(diff.shape[0]):
        v = diff[i]
        sign = 1 if v > 0.0 else (-1 if v < 0.0 else 0)
        if sign == 0:
            sign = prev_sign
        if prev_sign != 0 and sign != 0 and sign != prev_sign:
            points.append(i)
        prev_sign = sign
    return np.asarray(points, dtype=np.int64)


def plan_segments(s, n_segments: int, tail: int, level: int = DEFAULT_WAVELET_LEVEL) -> SegmentPlan:
    """Choose cut points for `s`: the fixed split m*l, or the right-most
    structure boundary inside [m*l - tail, m*l] when one exists.

    Cut windows are measured against the original fixed grid, never against
    previously moved cuts, so tail < l guarantees non-crossing cuts. With
    tail = 0 this reduces exactly to fixed equal-length partitioning.
    """
    s = as_series(s)
    d = s.shape[0]
    if n_segments < 1:
        raise ValueError(f"n_segments must be >= 1, got {n_segments}")
    base = d // n_segments
    if base < 2:
        raise ValueError(
            f"segments of length {base} too short: {n_segments} segments over {d} samples"
        )
    if tail < 0 or tail >= base:
        raise ValueError(f"tail must satisfy 0 <= tail < {base}, got {tail}")

    if n_segments == 1 or tail == 0:
        cuts = tuple(m * base for m in range(1, n_segments))
    else:
        coeffs = modwt_scale(s, level)
        points = segment_points(s, coeffs)
        cuts_list = []
        for m in range(1, n_segments):
            fixed = m * base
            in_window = points[(points >= fixed - tail) & (points <= fixed)]
            cuts_list.append(int(in_window[-1]) if in_window.size else fixed)
        cuts = tuple(cuts_list)
    return SegmentPlan(
        cut_points=cuts,
        n_segments=n_segments,
        base_length=base,
        tail=tail,
        wavelet_level=level,
        series_length=d,
    )


def extract_segments(s, plan: SegmentPlan) -> np.ndarray:
    """Slice `s` at the plan's cuts and resample every piece to l + tail.

    Returns an (M, l + tail) array. When D is not divisible by M the final
    segment absorbs the remainder before resampling.
    """
    s = as_series(s)
    if s.shape[0] != plan.series_length:
        raise ValueError(
            f"series length {s.shape[0]} does not match plan ({plan.series_length})"
        )
    target = plan.segment_length
    out = np.empty((plan.n_segments, target))
    for m, (start, stop) in enumerate(plan.bounds()):
        if stop - start < 2:
            raise ValueError(f"segment [{start}, {stop}) too short to resample")
        out[m] = resample_linear(s[start:stop], target)
    return out
