"""Hot numeric kernels: banded DTW with pruning, envelopes, lower bounds.

Every kernel is written as plain numpy + loops and compiled with numba when
available. Set PQDTW_NO_NUMBA=1 to force the uncompiled fallback path (same
function bodies, interpreted). See benchmarks/compare_backends.py for the
speed difference.
"""

import os

import numpy as np

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("PQDTW_NO_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)


def jit(func):
    if USE_NUMBA:
        return _njit(cache=True)(func)
    return func


@jit
def sq_euclidean(a, b):
    acc = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        acc += d * d
    return acc


@jit
def dtw_sq(a, b, radius, ub_sq):
    """Squared DTW restricted to a Sakoe-Chiba band of half-width `radius`.

    Cells whose accumulated cost exceeds ub_sq can never lie on a path that
    finishes at or below ub_sq (costs only grow), so they are treated as
    unreachable; when the whole result provably exceeds ub_sq, returns inf.
    With ub_sq = inf this is plain exact banded DTW. All bound comparisons
    happen in the squared domain, so a bound within an ulp of the true value
    may land on either side.
    """
    n = a.shape[0]
    m = b.shape[0]
    prev = np.full(m + 1, np.inf)
    curr = np.full(m + 1, np.inf)
    prev[0] = 0.0
    sc = 1
    for i in range(1, n + 1):
        lo = i - radius
        if lo < 1:
            lo = 1
        if lo < sc:
            lo = sc
        hi = i + radius
        if hi > m:
            hi = m
        if lo > hi:
            return np.inf
        curr[lo - 1] = np.inf
        found = False
        next_sc = hi + 1
        for j in range(lo, hi + 1):
            d = a[i - 1] - b[j - 1]
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            v = d * d + best
            if v > ub_sq:
                v = np.inf
            curr[j] = v
            if not found and v != np.inf:
                found = True
                next_sc = j
        if not found:
            return np.inf
        sc = next_sc
        if hi + 1 <= m:
            curr[hi + 1] = np.inf
        tmp = prev
        prev = curr
        curr = tmp
    return prev[m]


@jit
def envelope(s, radius):
    """Sliding min/max band: U_i = max(s_j : |i-j| <= radius), L_i = min."""
    n = s.shape[0]
    upper = np.empty(n)
    lower = np.empty(n)
    for i in range(n):
        lo = i - radius
        if lo < 0:
            lo = 0
        hi = i + radius
        if hi > n - 1:
            hi = n - 1
        mx = s[lo]
        mn = s[lo]
        for j in range(lo + 1, hi + 1):
            v = s[j]
            if v > mx:
                mx = v
            if v < mn:
                mn = v
        upper[i] = mx
        lower[i] = mn
    return upper, lower


@jit
def lb_keogh_sq(query, upper, lower):
    acc = 0.0
    for i in range(query.shape[0]):
        q = query[i]
        if q > upper[i]:
            e = q - upper[i]
            acc += e * e
        elif q < lower[i]:
            e = lower[i] - q
            acc += e * e
    return acc


@jit
def lb_kim_sq(a, b):
    d0 = a[0] - b[0]
    d1 = a[a.shape[0] - 1] - b[b.shape[0] - 1]
    return d0 * d0 + d1 * d1


@jit
def nn_cascade(query, cands, uppers, lowers, radius):
    """Nearest candidate by banded DTW, pruned with lb_kim -> lb_keogh ->
    DTW-with-upper-bound. Loss-free: result matches an unpruned linear scan,
    ties broken by lowest index. Envelopes belong to the candidates.
    """
    best_idx = -1
    best_sq = np.inf
    for c in range(cands.shape[0]):
        cand = cands[c]
        if lb_kim_sq(query, cand) >= best_sq:
            continue
        if lb_keogh_sq(query, uppers[c], lowers[c]) >= best_sq:
            continue
        d = dtw_sq(query, cand, radius, best_sq)
        if d < best_sq:
            best_sq = d
            best_idx = c
    return best_idx, best_sq


@jit
def dtw_many_sq(query, data, radius):
    out = np.empty(data.shape[0])
    for i in range(data.shape[0]):
        out[i] = dtw_sq(query, data[i], radius, np.inf)
    return out


@jit
def euclidean_many_sq(query, data):
    out = np.empty(data.shape[0])
    for i in range(data.shape[0]):
        out[i] = sq_euclidean(query, data[i])
    return out


@jit
def pairwise_dtw_sq(data, radius):
    n = data.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = dtw_sq(data[i], data[j], radius, np.inf)
            out[i, j] = d
            out[j, i] = d
    return out


@jit
def pairwise_euclidean_sq(data):
    n = data.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = sq_euclidean(data[i], data[j])
            out[i, j] = d
            out[j, i] = d
    return out


@jit
def assign_nearest_sq(data, centroids, radius):
    """DTW-nearest centroid per row, ties to the lowest centroid index."""
    n = data.shape[0]
    k = centroids.shape[0]
    assign = np.empty(n, dtype=np.int64)
    dists = np.empty(n)
    for i in range(n):
        best = np.inf
        best_k = -1
        for c in range(k):
            d = dtw_sq(data[i], centroids[c], radius, best)
            if d < best:
                best = d
                best_k = c
        assign[i] = best_k
        dists[i] = best
    return assign, dists


@jit
def dba_accumulate(center, members, radius):
    """One barycenter-averaging pass: DTW-align every member to `center`
    and accumulate, per center coordinate, the sum and count of member
    values aligned to it. Traceback ties prefer diagonal, then left
    (member index decreases), then up.
    """
    n = center.shape[0]
    m_count = members.shape[0]
    sums = np.zeros(n)
    counts = np.zeros(n)
    cost = np.empty((n + 1, members.shape[1] + 1))
    for s in range(m_count):
        member = members[s]
        m = member.shape[0]
        for i in range(n + 1):
            for j in range(m + 1):
                cost[i, j] = np.inf
        cost[0, 0] = 0.0
        for i in range(1, n + 1):
            lo = i - radius
            if lo < 1:
                lo = 1
            hi = i + radius
            if hi > m:
                hi = m
            for j in range(lo, hi + 1):
                d = center[i - 1] - member[j - 1]
                best = cost[i - 1, j - 1]
                if cost[i, j - 1] < best:
                    best = cost[i, j - 1]
                if cost[i - 1, j] < best:
                    best = cost[i - 1, j]
                cost[i, j] = d * d + best
        i = n
        j = m
        while True:
            sums[i - 1] += member[j - 1]
            counts[i - 1] += 1.0
            if i == 1 and j == 1:
                break
            diag = cost[i - 1, j - 1]
            left = cost[i, j - 1]
            up = cost[i - 1, j]
            if diag <= left and diag <= up:
                i -= 1
                j -= 1
            elif left <= up:
                j -= 1
            else:
                i -= 1
    return sums, counts


@jit
def centroid_lut_sq(centroids, radius):
    """Squared DTW between every centroid pair of every subspace."""
    n_sub = centroids.shape[0]
    k = centroids.shape[1]
    lut = np.zeros((n_sub, k, k))
    for m in range(n_sub):
        for i in range(k):
            for j in range(i + 1, k):
                d = dtw_sq(centroids[m, i], centroids[m, j], radius, np.inf)
                lut[m, i, j] = d
                lut[m, j, i] = d
    return lut


@jit
def asym_table_sq(segments, centroids, radius):
    """Squared DTW from each query segment to every centroid of its subspace."""
    n_sub = centroids.shape[0]
    k = centroids.shape[1]
    out = np.empty((n_sub, k))
    for m in range(n_sub):
        for c in range(k):
            out[m, c] = dtw_sq(segments[m], centroids[m, c], radius, np.inf)
    return out


def warm():
    """Run every kernel once on tiny inputs so JIT compilation (or cache
    loading) happens up front instead of inside a timed or latency-sensitive
    call."""
    tiny = np.array([[0.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 0.0]])
    pairwise_dtw_sq(tiny, 4)
    pairwise_euclidean_sq(tiny)
    upper, lower = envelope(tiny[0], 1)
    nn_cascade(tiny[0], tiny, np.stack([upper, upper]), np.stack([lower, lower]), 1)
    dtw_many_sq(tiny[0], tiny, 1)
    euclidean_many_sq(tiny[0], tiny)
    asym_table_sq(tiny[:1], tiny[None, :, :], 1)
    centroid_lut_sq(tiny[None, :, :], 1)
    assign_nearest_sq(tiny, tiny, 1)
    dba_accumulate(tiny[0], tiny, 4)
