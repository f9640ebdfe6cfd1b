"""Nearest-neighbour classification and agglomerative clustering over exact
or quantized distances, with Rand index / adjusted Rand index evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, codec
from .codec import Codebook
from .distance import Window, effective_radius
from .series import LabeledDataset, as_series

MEASURES = ("ed", "dtw", "pq-sym", "pq-asym")
LINKAGES = ("single", "average", "complete")


@dataclass(frozen=True)
class ClassificationResult:
    """Neighbours ranked by ascending distance, ties by training index."""

    neighbors: tuple[tuple[str, float], ...]

    def top_labels(self, k: int) -> list[str]:
        """First k distinct labels in rank order."""
        seen: list[str] = []
        for label, _ in self.neighbors:
            if label not in seen:
                seen.append(label)
                if len(seen) == k:
                    break
        return seen


def _query_distances(train: LabeledDataset, query, measure: str,
                     window: Window, codebook: Codebook | None,
                     codes: np.ndarray | None) -> np.ndarray:
    query = as_series(query)
    if measure == "ed":
        if query.shape[0] != train.length:
            raise ValueError("query length does not match the training set")
        return np.sqrt(_kernels.euclidean_many_sq(query, train.values))
    if measure == "dtw":
        radius = effective_radius(window, query.shape[0], train.length)
        return np.sqrt(_kernels.dtw_many_sq(query, train.values, radius))
    if measure in ("pq-sym", "pq-asym"):
        if codebook is None or codes is None:
            raise ValueError(f"measure {measure!r} needs a codebook and encoded training set")
        if measure == "pq-asym":
            table = codec.asym_table(codebook, query)
            return codec.asym_distance_many(table, codes)
        q_code = codec.encode(codebook, query)
        return np.array(
            [codec.sym_distance(codebook, q_code, c) for c in codes]
        )
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def knn_classify(train: LabeledDataset, query, k: int, measure: str = "dtw",
                 window: Window = None, codebook: Codebook | None = None,
                 codes: np.ndarray | None = None) -> ClassificationResult:
    """Rank the k nearest training series under the chosen measure.

    The asymmetric table is built once per query; with measure "dtw" the
    window applies to the full-length series.
    """
    if train.labels is None:
        raise ValueError("training set has no labels")
    if not 1 <= k <= train.n:
        raise ValueError(f"need 1 <= k <= {train.n}, got {k}")
    dists = _query_distances(train, query, measure, window, codebook, codes)
    order = np.argsort(dists, kind="stable")[:k]
    return ClassificationResult(
        neighbors=tuple((train.labels[i], float(dists[i])) for i in order)
    )


def pairwise_matrix(data, measure: str = "dtw", window: Window = None,
                    codebook: Codebook | None = None,
                    codes: np.ndarray | None = None,
                    lb_replace: bool = False) -> np.ndarray:
    """Symmetric distance matrix with zero diagonal, computed once per pair.

    For "pq-sym" the series are encoded once and distances come from the
    codebook table; lb_replace additionally swaps zero entries of pairs that
    share a code for the Keogh lower bound between the raw segments.
    """
    values = data.values if isinstance(data, LabeledDataset) else np.asarray(
        data, dtype=np.float64
    )
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least 2 series")
    if measure == "ed":
        return np.sqrt(_kernels.pairwise_euclidean_sq(values))
    if measure == "dtw":
        radius = effective_radius(window, values.shape[1], values.shape[1])
        return np.sqrt(_kernels.pairwise_dtw_sq(values, radius))
    if measure == "pq-sym":
        if codebook is None:
            raise ValueError("measure 'pq-sym' needs a codebook")
        if codes is None:
            codes = codec.encode_dataset(codebook, values)
        codes = np.asarray(codes, dtype=np.int64)
        total = np.zeros((n, n))
        for m in range(codebook.n_subspaces):
            cm = codes[:, m]
            total += codebook.lut[m][np.ix_(cm, cm)]
        if lb_replace:
            for m in range(codebook.n_subspaces):
                cm = codes[:, m]
                lb_own = np.empty(n)
                for i in range(n):
                    seg = codebook.segments(values[i])[m]
                    c = cm[i]
                    lb_own[i] = _kernels.lb_keogh_sq(
                        seg, codebook.env_upper[m, c], codebook.env_lower[m, c]
                    )
                shared = cm[:, None] == cm[None, :]
                total += np.where(shared, np.maximum(lb_own[:, None], lb_own[None, :]), 0.0)
        out = np.sqrt(total)
        np.fill_diagonal(out, 0.0)
        return out
    if measure == "pq-asym":
        raise ValueError("asymmetric distances do not form a symmetric matrix; use 'pq-sym'")
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


@dataclass(frozen=True)
class Dendrogram:
    """Merge list (id_a, id_b, height, new_size); new clusters take ids
    n_leaves, n_leaves + 1, ... in merge order."""

    merges: tuple[tuple[int, int, float, int], ...]
    n_leaves: int


def agglomerative(matrix: np.ndarray, linkage: str = "complete") -> Dendrogram:
    """Bottom-up clustering via Lance-Williams updates on a precomputed
    matrix. Ties break on the lexicographically smallest cluster id pair.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; expected one of {LINKAGES}")
    matrix = np.asarray(matrix, dtype=np.float64)
    n = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != n:
        raise ValueError("matrix must be square")
    if n < 2:
        raise ValueError("need at least 2 points to cluster")
    if not np.array_equal(matrix, matrix.T):
        raise ValueError("matrix must be symmetric")

    # work matrix over active clusters; ids stay sorted position-wise because
    # merges always remove two positions and append the newest (largest) id
    work = matrix.astype(np.float64).copy()
    np.fill_diagonal(work, np.inf)
    ids = list(range(n))
    sizes = [1] * n
    merges: list[tuple[int, int, float, int]] = []

    for step in range(n - 1):
        k = work.shape[0]
        iu = np.triu_indices(k, 1)
        flat = work[iu]
        pos = int(np.argmin(flat))  # first hit == smallest (i, j) position pair
        height = float(flat[pos])
        i, j = int(iu[0][pos]), int(iu[1][pos])

        id_a, id_b = ids[i], ids[j]
        size_new = sizes[i] + sizes[j]
        merges.append((id_a, id_b, height, size_new))

        d_i = work[i]
        d_j = work[j]
        if linkage == "single":
            d_new = np.minimum(d_i, d_j)
        elif linkage == "complete":
            d_new = np.maximum(d_i, d_j)
        else:
            d_new = (sizes[i] * d_i + sizes[j] * d_j) / size_new
        keep = [p for p in range(k) if p not in (i, j)]
        work = work[np.ix_(keep, keep)]
        row = d_new[keep]
        work = np.pad(work, ((0, 1), (0, 1)), constant_values=np.inf)
        work[-1, :-1] = row
        work[:-1, -1] = row
        ids = [ids[p] for p in keep] + [n + step]
        sizes = [sizes[p] for p in keep] + [size_new]

    return Dendrogram(merges=tuple(merges), n_leaves=n)


def cut_k(dend: Dendrogram, k: int) -> np.ndarray:
    """Labels in [0, k) obtained by undoing the last k - 1 merges.

    Label values follow the order of each cluster's smallest leaf index.
    """
    n = dend.n_leaves
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}, got {k}")
    parent = list(range(n + len(dend.merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step, (a, b, _, _) in enumerate(dend.merges[: n - k]):
        new = n + step
        parent[find(a)] = new
        parent[find(b)] = new

    labels = np.empty(n, dtype=np.int64)
    root_to_label: dict[int, int] = {}
    for leaf in range(n):
        root = find(leaf)
        if root not in root_to_label:
            root_to_label[root] = len(root_to_label)
        labels[leaf] = root_to_label[root]
    return labels


def _contingency(pred, truth) -> np.ndarray:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ValueError("label sequences must be 1-D and of equal length")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    for p, t in zip(pi, ti):
        table[p, t] += 1
    return table


def rand_index(pred, truth) -> float:
    """Fraction of point pairs on which the two clusterings agree."""
    table = _contingency(pred, truth)
    n = int(table.sum())
    pairs = math.comb(n, 2)
    if pairs == 0:
        return 1.0
    same_both = sum(math.comb(int(v), 2) for v in table.flat)
    same_pred = sum(math.comb(int(v), 2) for v in table.sum(axis=1))
    same_truth = sum(math.comb(int(v), 2) for v in table.sum(axis=0))
    disagree = (same_pred - same_both) + (same_truth - same_both)
    return (pairs - disagree) / pairs


def adjusted_rand_index(pred, truth) -> float:
    """Rand index corrected for chance (expected value 0 for random labels)."""
    table = _contingency(pred, truth)
    n = int(table.sum())
    sum_cells = sum(math.comb(int(v), 2) for v in table.flat)
    sum_rows = sum(math.comb(int(v), 2) for v in table.sum(axis=1))
    sum_cols = sum(math.comb(int(v), 2) for v in table.sum(axis=0))
    pairs = math.comb(n, 2)
    if pairs == 0:
        return 1.0
    expected = sum_rows * sum_cols / pairs
    maximum = (sum_rows + sum_cols) / 2
    if maximum == expected:
        return 1.0
    return (sum_cells - expected) / (maximum - expected)


def topk_accuracy(results: list[ClassificationResult], truths: list[str],
                  ks: tuple[int, ...] = (1, 3, 10, 20)) -> dict[int, float]:
    """Share of queries whose true label appears among the first k distinct
    ranked labels."""
    if len(results) != len(truths):
        raise ValueError("results and truths must have equal length")
    out = {}
    for k in ks:
        hits = sum(
            1 for res, truth in zip(results, truths) if truth in res.top_labels(k)
        )
        out[k] = hits / len(results) if results else 0.0
    return out
