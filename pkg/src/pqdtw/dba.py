"""Barycenter averaging under DTW and the k-means built on top of it.

Centroid updates replace each barycenter coordinate with the arithmetic mean
of all member values DTW-aligned to it. Seeding is k-means++ over DTW
distances driven by an explicit seed, and every reduction runs in a fixed
order, so refitting with the same seed reproduces the model bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .distance import Window, effective_radius

DEFAULT_DBA_ITER = 10
DEFAULT_KMEANS_ITER = 30


@dataclass(frozen=True)
class ClusterModel:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    inertia_history: tuple[float, ...] = field(default=())
    n_iter: int = 0


def dba_barycenter(members, init, window: Window = None,
                   max_iter: int = DEFAULT_DBA_ITER, tol: float = 1e-9) -> np.ndarray:
    """Iterative DTW barycenter of equal-length series, starting from `init`.

    Stops after `max_iter` passes or when the barycenter moves by less than
    `tol` in max-norm.
    """
    members = np.atleast_2d(np.asarray(members, dtype=np.float64))
    if members.shape[0] == 0:
        raise ValueError("members must be non-empty")
    init = np.asarray(init, dtype=np.float64)
    if init.shape[0] != members.shape[1]:
        raise ValueError("init must have the same length as the members")
    radius = effective_radius(window, init.shape[0], members.shape[1])
    center = init.copy()
    for _ in range(max_iter):
        sums, counts = _kernels.dba_accumulate(center, members, radius)
        new = sums / counts
        moved = float(np.max(np.abs(new - center)))
        center = new
        if moved < tol:
            break
    return center


def _kmeanspp_init(data, k, radius, rng) -> np.ndarray:
    n = data.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = int(rng.integers(n))
    d_sq = _kernels.dtw_many_sq(data[chosen[0]], data, radius)
    for c in range(1, k):
        total = d_sq.sum()
        if total > 0.0:
            idx = int(rng.choice(n, p=d_sq / total))
        else:
            # all remaining points coincide with a chosen centroid
            idx = int(rng.integers(n))
        chosen[c] = idx
        d_sq = np.minimum(d_sq, _kernels.dtw_many_sq(data[idx], data, radius))
    return data[chosen].copy()


def dba_kmeans(data, n_clusters: int, window: Window = None,
               max_iter: int = DEFAULT_KMEANS_ITER, seed: int = 0,
               dba_iter: int = DEFAULT_DBA_ITER) -> ClusterModel:
    """Lloyd iterations with DTW assignment and barycenter-averaging updates.

    Empty clusters are re-seeded with the member farthest from its centroid.
    Deterministic given `seed`.
    """
    data = np.ascontiguousarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("data must be a 2-D (N, L) array")
    n = data.shape[0]
    if not 1 <= n_clusters <= n:
        raise ValueError(f"need 1 <= n_clusters <= {n}, got {n_clusters}")
    radius = effective_radius(window, data.shape[1], data.shape[1])
    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(data, n_clusters, radius, rng)

    assignments = None
    history: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        assign, d_sq = _kernels.assign_nearest_sq(data, centroids, radius)
        history.append(float(d_sq.sum()))
        if assignments is not None and np.array_equal(assign, assignments):
            assignments = assign
            break
        assignments = assign
        for k in range(n_clusters):
            members = data[assign == k]
            if members.shape[0] == 0:
                far = int(np.argmax(d_sq))
                centroids[k] = data[far]
                d_sq[far] = 0.0
                continue
            centroids[k] = dba_barycenter(members, centroids[k], window, dba_iter)
    return ClusterModel(
        centroids=centroids,
        assignments=assignments,
        inertia=history[-1],
        inertia_history=tuple(history),
        n_iter=iterations,
    )
