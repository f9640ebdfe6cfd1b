"""HTTP classification service for real-time sketch recognition.

The model bundle (codebook, encoded training set with labels, preprocessing
config) is loaded once at startup and shared read-only by all request
handlers; each request only builds private scratch tables, so concurrent
requests never interfere.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import codec
from .codec import Codebook
from .strokes import DEFAULT_RESAMPLE, DegenerateStrokeError, preprocess, strokes_from_json

BUNDLE_VERSION = 1


class BundleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ModelBundle:
    codebook: Codebook
    codes: np.ndarray  # (N, M)
    labels: list[str]
    symbols: dict[str, str]  # label -> display string
    resample_points: int = DEFAULT_RESAMPLE

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[1] != self.codebook.n_subspaces:
            raise BundleFormatError("codes must be an (N, M) id array")
        if np.any(codes < 0) or np.any(codes >= self.codebook.n_centroids):
            raise BundleFormatError("code id out of range for the codebook")
        if len(self.labels) != codes.shape[0]:
            raise BundleFormatError("every code needs a label")
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "labels", [str(s) for s in self.labels])

    def symbol_counts(self) -> Counter:
        return Counter(self.labels)


def save_bundle(bundle: ModelBundle, path) -> None:
    doc = {
        "version": BUNDLE_VERSION,
        "codebook": codec.to_doc(bundle.codebook),
        "codes": [[int(v) for v in row] for row in bundle.codes],
        "labels": bundle.labels,
        "symbols": bundle.symbols,
        "resample_points": bundle.resample_points,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_bundle(path) -> ModelBundle:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BundleFormatError(f"{path}: not valid JSON: {exc}") from exc
    if doc.get("version") != BUNDLE_VERSION:
        raise BundleFormatError(f"{path}: unsupported bundle version {doc.get('version')!r}")
    try:
        return ModelBundle(
            codebook=codec.from_doc(doc["codebook"], source=str(path)),
            codes=np.asarray(doc["codes"], dtype=np.int64),
            labels=list(doc["labels"]),
            symbols=dict(doc.get("symbols", {})),
            resample_points=int(doc.get("resample_points", DEFAULT_RESAMPLE)),
        )
    except (KeyError, TypeError) as exc:
        raise BundleFormatError(f"{path}: malformed bundle: {exc}") from exc


def classify_strokes(bundle: ModelBundle, strokes, k: int = 20,
                     mode: str = "asym") -> list[tuple[str, float]]:
    """Preprocess, quantize against the bundle and rank candidate symbols.

    Returns up to k (symbol, distance) pairs ascending by distance, one entry
    per distinct symbol. mode "asym" (default, lower distortion) builds the
    per-query table; "sym" encodes the query and uses the stored table only.
    """
    series = preprocess(strokes, bundle.resample_points)
    if mode == "asym":
        table = codec.asym_table(bundle.codebook, series)
        dists = codec.asym_distance_many(table, bundle.codes)
    elif mode == "sym":
        q_code = codec.encode(bundle.codebook, series)
        dists = np.array(
            [codec.sym_distance(bundle.codebook, q_code, c) for c in bundle.codes]
        )
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'asym' or 'sym'")
    order = np.argsort(dists, kind="stable")
    out: list[tuple[str, float]] = []
    seen: set[str] = set()
    for i in order:
        label = bundle.labels[i]
        if label in seen:
            continue
        seen.add(label)
        out.append((label, float(dists[i])))
        if len(out) == k:
            break
    return out


def create_app(bundle: ModelBundle | None) -> FastAPI:
    app = FastAPI(title="pqdtw classify service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.bundle = bundle

    @app.get("/health")
    def health():
        loaded = app.state.bundle is not None
        n_symbols = len(set(app.state.bundle.labels)) if loaded else 0
        return {"status": "ok", "model_loaded": loaded, "n_symbols": n_symbols}

    @app.get("/symbols")
    def symbols():
        if app.state.bundle is None:
            return JSONResponse({"error": "model not loaded"}, status_code=503)
        counts = app.state.bundle.symbol_counts()
        return [
            {"symbol": label, "example_count": count}
            for label, count in sorted(counts.items())
        ]

    @app.post("/classify")
    async def classify(request: Request, k: int = Query(default=20, ge=1),
                       mode: str = Query(default="asym")):
        if app.state.bundle is None:
            return JSONResponse({"error": "model not loaded"}, status_code=503)
        started = time.perf_counter()
        try:
            payload = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return JSONResponse({"error": f"malformed JSON: {exc}"}, status_code=400)
        try:
            strokes = strokes_from_json(payload)
            ranked = classify_strokes(app.state.bundle, strokes, k=k, mode=mode)
        except (ValueError, DegenerateStrokeError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        latency_ms = (time.perf_counter() - started) * 1000.0
        return {
            "candidates": [{"symbol": s, "score": d} for s, d in ranked],
            "latency_ms": latency_ms,
        }

    return app


def serve(bundle_path, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    from . import _kernels

    bundle = load_bundle(bundle_path)
    # compile / load the jit kernels before accepting traffic so the first
    # request doesn't pay the warm-up cost
    _kernels.warm()
    uvicorn.run(create_app(bundle), host=host, port=port, log_level="warning")
