"""Core time-series values, normalization, resampling and dataset ingestion.

A time series is a plain 1-D float64 numpy array of length >= 2 with finite
values; `as_series` is the single validation gate. Datasets are immutable
bundles of equal-length series with optional string labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_STD = 1e-12


class ParseError(ValueError):
    """A dataset file could not be parsed; the message names the line."""


def as_series(values) -> np.ndarray:
    """Validate and return a 1-D float64 series (length >= 2, all finite)."""
    s = np.asarray(values, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"series must be 1-D, got shape {s.shape}")
    if s.shape[0] < 2:
        raise ValueError(f"series must have length >= 2, got {s.shape[0]}")
    if not np.all(np.isfinite(s)):
        raise ValueError("series contains NaN or Inf")
    return s


def z_normalize(s) -> np.ndarray:
    """Shift/scale to mean 0 and population std 1.

    Near-constant input (std < EPS_STD) maps to all zeros instead of
    blowing up; constant series occur naturally in stroke data.
    """
    s = as_series(s)
    mu = s.mean()
    sigma = s.std()
    if sigma < EPS_STD:
        return np.zeros_like(s)
    return (s - mu) / sigma


def resample_linear(s, target_len: int) -> np.ndarray:
    """Linearly resample to `target_len` points over a uniform parameter grid.

    Endpoints are preserved exactly; resampling to the current length is the
    identity (bit-exact).
    """
    s = as_series(s)
    if target_len < 2:
        raise ValueError(f"target_len must be >= 2, got {target_len}")
    n = s.shape[0]
    if target_len == n:
        return s.copy()
    grid = np.linspace(0.0, 1.0, target_len)
    return np.interp(grid, np.linspace(0.0, 1.0, n), s)


@dataclass(frozen=True)
class LabeledDataset:
    """Equal-length series stacked as an (N, D) array, with optional labels."""

    values: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-D (N, D), got shape {values.shape}")
        if values.shape[0] < 1:
            raise ValueError("dataset is empty")
        if values.shape[1] < 2:
            raise ValueError("series length must be >= 2")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset contains NaN or Inf")
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = [str(x) for x in self.labels]
            if len(labels) != values.shape[0]:
                raise ValueError(
                    f"{len(labels)} labels for {values.shape[0]} series"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    def normalized(self) -> "LabeledDataset":
        out = np.stack([z_normalize(row) for row in self.values])
        return LabeledDataset(out, self.labels)


def load_ucr_tsv(path) -> LabeledDataset:
    """Load a UCR-style TSV: one series per line, label first, tab-separated."""
    rows: list[np.ndarray] = []
    labels: list[str] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ParseError(
                    f"{path}: line {lineno}: expected label and >= 2 values"
                )
            labels.append(fields[0])
            try:
                row = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
            if width is None:
                width = row.shape[0]
            elif row.shape[0] != width:
                raise ParseError(
                    f"{path}: line {lineno}: has {row.shape[0]} values, "
                    f"expected {width}"
                )
            rows.append(row)
    if not rows:
        raise ParseError(f"{path}: empty dataset")
    return LabeledDataset(np.stack(rows), labels)


def save_ucr_tsv(dataset: LabeledDataset, path) -> None:
    labels = dataset.labels or ["0"] * dataset.n
    with open(path, "w", encoding="utf-8") as fh:
        for label, row in zip(labels, dataset.values):
            fh.write(label + "\t" + "\t".join(repr(float(v)) for v in row) + "\n")
