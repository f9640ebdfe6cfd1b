"""The elastic product quantizer: training, encoding, table-driven distances,
memory accounting and model (de)serialization.

A trained codebook holds, per subspace, K centroids learned with
barycenter-averaging k-means, their warping envelopes, and a K-by-K table of
squared centroid-to-centroid DTW distances. All distances stay squared inside
the tables and are square-rooted only at the public surface.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dba import DEFAULT_DBA_ITER, DEFAULT_KMEANS_ITER, dba_kmeans
from .distance import Window, effective_radius
from .segmentation import (
    DEFAULT_WAVELET_LEVEL,
    extract_segments,
    plan_segments,
)
from .series import LabeledDataset, as_series, resample_linear

CODEBOOK_VERSION = 1


class CodebookFormatError(ValueError):
    """A codebook file is unreadable or violates a model invariant."""


@dataclass(frozen=True)
class Codebook:
    """Per-subspace centroids plus everything precomputed at training time."""

    n_subspaces: int
    n_centroids: int
    series_length: int
    window: Window
    tail: int
    wavelet_level: int
    segment_length: int
    centroids: np.ndarray  # (M, K, segment_length)
    lut: np.ndarray  # (M, K, K) squared DTW
    env_upper: np.ndarray  # (M, K, segment_length)
    env_lower: np.ndarray  # (M, K, segment_length)
    version: int = CODEBOOK_VERSION

    def __post_init__(self):
        self.validate()

    @property
    def code_dtype(self):
        return np.uint8 if self.n_centroids <= 256 else np.uint16

    @property
    def quant_radius(self) -> int:
        return effective_radius(self.window, self.segment_length, self.segment_length)

    def validate(self) -> None:
        m, k, seg = self.n_subspaces, self.n_centroids, self.segment_length
        if self.centroids.shape != (m, k, seg):
            raise CodebookFormatError(
                f"centroids shape {self.centroids.shape} != {(m, k, seg)}"
            )
        if self.lut.shape != (m, k, k):
            raise CodebookFormatError(f"lut shape {self.lut.shape} != {(m, k, k)}")
        if self.env_upper.shape != (m, k, seg) or self.env_lower.shape != (m, k, seg):
            raise CodebookFormatError("envelope shapes do not match centroids")
        for sub in range(m):
            lut = self.lut[sub]
            if np.any(np.diag(lut) != 0.0):
                raise CodebookFormatError(f"lut diagonal not zero in subspace {sub}")
            if not np.array_equal(lut, lut.T):
                raise CodebookFormatError(f"lut not symmetric in subspace {sub}")
        if np.any(self.env_upper < self.centroids) or np.any(
            self.env_lower > self.centroids
        ):
            raise CodebookFormatError("envelopes do not contain their centroids")

    def plan(self, s):
        return plan_segments(s, self.n_subspaces, self.tail, self.wavelet_level)

    def segments(self, s) -> np.ndarray:
        s = as_series(s)
        if s.shape[0] != self.series_length:
            raise ValueError(
                f"series length {s.shape[0]} != codebook length {self.series_length}"
            )
        return extract_segments(s, self.plan(s))


def _dataset_values(data) -> np.ndarray:
    if isinstance(data, LabeledDataset):
        return data.values
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        arr = np.stack([as_series(row) for row in data])
    return arr


def train(data, n_subspaces: int, n_centroids: int = 256, tail: int | None = None,
          wavelet_level: int = DEFAULT_WAVELET_LEVEL, window: Window = None,
          seed: int = 0, kmeans_iter: int = DEFAULT_KMEANS_ITER,
          dba_iter: int = DEFAULT_DBA_ITER) -> Codebook:
    """Fit one sub-codebook per subspace and precompute envelopes + tables.

    `tail` defaults to a quarter of the base segment length; pass 0 to
    disable pre-alignment. When the training set is smaller than
    `n_centroids`, the codebook size is clamped to the set size.
    """
    values = _dataset_values(data)
    n, d = values.shape
    base = d // n_subspaces
    if tail is None:
        tail = base // 4
    k = min(n_centroids, n)

    segments = np.empty((n, n_subspaces, base + tail))
    for i in range(n):
        segments[i] = extract_segments(
            values[i], plan_segments(values[i], n_subspaces, tail, wavelet_level)
        )

    seg_len = base + tail
    centroids = np.empty((n_subspaces, k, seg_len))
    for m in range(n_subspaces):
        model = dba_kmeans(
            segments[:, m],
            k,
            window=window,
            max_iter=kmeans_iter,
            seed=seed + m,
            dba_iter=dba_iter,
        )
        centroids[m] = model.centroids

    radius = effective_radius(window, seg_len, seg_len)
    env_upper = np.empty_like(centroids)
    env_lower = np.empty_like(centroids)
    for m in range(n_subspaces):
        for c in range(k):
            env_upper[m, c], env_lower[m, c] = _kernels.envelope(
                centroids[m, c], radius
            )
    lut = _kernels.centroid_lut_sq(centroids, radius)

    return Codebook(
        n_subspaces=n_subspaces,
        n_centroids=k,
        series_length=d,
        window=window,
        tail=tail,
        wavelet_level=wavelet_level,
        segment_length=seg_len,
        centroids=centroids,
        lut=lut,
        env_upper=env_upper,
        env_lower=env_lower,
    )


def encode(cb: Codebook, s) -> np.ndarray:
    """Quantize a series to its per-subspace nearest-centroid identifiers.

    The nearest-neighbour searches run through the loss-free lower-bound
    cascade; ties resolve to the lowest centroid id.
    """
    segments = cb.segments(s)
    code = np.empty(cb.n_subspaces, dtype=cb.code_dtype)
    for m in range(cb.n_subspaces):
        idx, _ = _kernels.nn_cascade(
            segments[m], cb.centroids[m], cb.env_upper[m], cb.env_lower[m],
            cb.quant_radius,
        )
        code[m] = idx
    return code


def encode_dataset(cb: Codebook, data) -> np.ndarray:
    values = _dataset_values(data)
    return np.stack([encode(cb, row) for row in values])


def reconstruct(cb: Codebook, code) -> np.ndarray:
    """Concatenate the coded centroids back into a series of the original
    length, resampling each to the fixed partition width.
    """
    code = _check_code(cb, code)
    base = cb.series_length // cb.n_subspaces
    pieces = []
    for m in range(cb.n_subspaces):
        width = base if m < cb.n_subspaces - 1 else cb.series_length - base * (
            cb.n_subspaces - 1
        )
        pieces.append(resample_linear(cb.centroids[m, code[m]], width))
    return np.concatenate(pieces)


def _check_code(cb: Codebook, code) -> np.ndarray:
    code = np.asarray(code)
    if code.shape != (cb.n_subspaces,):
        raise ValueError(f"code must have exactly {cb.n_subspaces} ids")
    if np.any(code < 0) or np.any(code >= cb.n_centroids):
        raise ValueError(f"code id out of range [0, {cb.n_centroids})")
    return code.astype(np.int64)


def sym_distance(cb: Codebook, code_a, code_b, lb_replace: bool = False,
                 originals=None) -> float:
    """Code-vs-code distance from the precomputed table.

    Plain mode aggregates the stored squared centroid distances. With
    lb_replace, subspaces where both codes coincide swap the zero table
    entry for the squared Keogh lower bound between the raw segments and
    the shared centroid's envelope, which keeps rankings meaningful when
    similar series collapse onto the same code.
    """
    a = _check_code(cb, code_a)
    b = _check_code(cb, code_b)
    total = 0.0
    for m in range(cb.n_subspaces):
        total += cb.lut[m, a[m], b[m]]
    if lb_replace:
        if originals is None:
            raise ValueError("lb_replace requires the pair of original series")
        x, y = originals
        seg_x = cb.segments(x)
        seg_y = cb.segments(y)
        for m in range(cb.n_subspaces):
            if a[m] != b[m]:
                continue
            c = a[m]
            lb_x = _kernels.lb_keogh_sq(seg_x[m], cb.env_upper[m, c], cb.env_lower[m, c])
            lb_y = _kernels.lb_keogh_sq(seg_y[m], cb.env_upper[m, c], cb.env_lower[m, c])
            total += max(lb_x, lb_y)
    return math.sqrt(total)


def asym_table(cb: Codebook, query) -> np.ndarray:
    """Per-query table of squared DTW distances from each query segment to
    every centroid of its subspace; built once, reused for every code.
    """
    segments = cb.segments(query)
    return _kernels.asym_table_sq(segments, cb.centroids, cb.quant_radius)


def asym_distance(table: np.ndarray, code) -> float:
    code = np.asarray(code, dtype=np.int64)
    if code.shape != (table.shape[0],):
        raise ValueError(f"code must have exactly {table.shape[0]} ids")
    if np.any(code < 0) or np.any(code >= table.shape[1]):
        raise ValueError(f"code id out of range [0, {table.shape[1]})")
    return math.sqrt(float(table[np.arange(table.shape[0]), code].sum()))


def asym_distance_many(table: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Asymmetric distances from one query table to many codes at once."""
    codes = np.asarray(codes, dtype=np.int64)
    total = np.zeros(codes.shape[0])
    for m in range(table.shape[0]):
        total += table[m, codes[:, m]]
    return np.sqrt(total)


def sym_pairwise(cb: Codebook, codes: np.ndarray) -> np.ndarray:
    """Symmetric distances between every pair of codes, via table gathers."""
    codes = np.asarray(codes, dtype=np.int64)
    n = codes.shape[0]
    total = np.zeros((n, n))
    for m in range(cb.n_subspaces):
        cm = codes[:, m]
        total += cb.lut[m][np.ix_(cm, cm)]
    return np.sqrt(total)


@dataclass(frozen=True)
class MemoryReport:
    compression_factor: float
    code_bytes_per_series: int
    total_code_bytes: int
    overhead_bits: int

    @property
    def overhead_mb(self) -> float:
        return self.overhead_bits / 8 / 1e6

    def lines(self) -> list[str]:
        return [
            f"compression factor: {self.compression_factor:g}x",
            f"code bytes per series: {self.code_bytes_per_series}",
            f"total code bytes: {self.total_code_bytes}",
            f"overhead: {self.overhead_bits} bits ({self.overhead_mb:.3f} MB)",
        ]


def memory_report(cb: Codebook, n_series: int) -> MemoryReport:
    """Compression factor 4D/M against 32-bit floats, plus the fixed model
    overhead of centroids, distance table and envelopes.
    """
    m, k, d = cb.n_subspaces, cb.n_centroids, cb.series_length
    per_series = m if k <= 256 else 2 * m
    return MemoryReport(
        compression_factor=4.0 * d / m,
        code_bytes_per_series=per_series,
        total_code_bytes=n_series * per_series,
        overhead_bits=32 * k * (3 * d + k * m),
    )


def _float_list(arr: np.ndarray):
    return [float(v) for v in arr]


def to_doc(cb: Codebook) -> dict:
    """Codebook as a JSON-ready document; floats round-trip bit-exact."""
    return {
        "version": cb.version,
        "d": cb.series_length,
        "m": cb.n_subspaces,
        "k": cb.n_centroids,
        "window_radius": cb.window,
        "tail": cb.tail,
        "wavelet_level": cb.wavelet_level,
        "segment_length": cb.segment_length,
        "centroids": [
            [_float_list(cb.centroids[m, c]) for c in range(cb.n_centroids)]
            for m in range(cb.n_subspaces)
        ],
        "lut": [
            [_float_list(cb.lut[m, i]) for i in range(cb.n_centroids)]
            for m in range(cb.n_subspaces)
        ],
        "envelopes": [
            [
                {
                    "upper": _float_list(cb.env_upper[m, c]),
                    "lower": _float_list(cb.env_lower[m, c]),
                }
                for c in range(cb.n_centroids)
            ]
            for m in range(cb.n_subspaces)
        ],
    }


def from_doc(doc: dict, source: str = "codebook") -> Codebook:
    version = doc.get("version")
    if version != CODEBOOK_VERSION:
        raise CodebookFormatError(f"{source}: unsupported codebook version {version!r}")
    try:
        m = int(doc["m"])
        k = int(doc["k"])
        envelopes = doc["envelopes"]
        return Codebook(
            n_subspaces=m,
            n_centroids=k,
            series_length=int(doc["d"]),
            window=None if doc["window_radius"] is None else int(doc["window_radius"]),
            tail=int(doc["tail"]),
            wavelet_level=int(doc["wavelet_level"]),
            segment_length=int(doc["segment_length"]),
            centroids=np.asarray(doc["centroids"], dtype=np.float64),
            lut=np.asarray(doc["lut"], dtype=np.float64),
            env_upper=np.asarray(
                [[envelopes[i][c]["upper"] for c in range(k)] for i in range(m)],
                dtype=np.float64,
            ),
            env_lower=np.asarray(
                [[envelopes[i][c]["lower"] for c in range(k)] for i in range(m)],
                dtype=np.float64,
            ),
            version=version,
        )
    except CodebookFormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CodebookFormatError(f"{source}: malformed codebook: {exc}") from exc


def save(cb: Codebook, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_doc(cb), fh)
        fh.write("\n")


def load(path) -> Codebook:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CodebookFormatError(f"{path}: not valid JSON: {exc}") from exc
    return from_doc(doc, source=str(path))
