"""Command-line entry point: training, encoding, querying, clustering,
benchmarking and serving."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import _kernels, codec, mining
from .distance import window_from_percent
from .mining import knn_classify, topk_accuracy
from .series import LabeledDataset, load_ucr_tsv
from .strokes import DEFAULT_RESAMPLE, Stroke, preprocess


def parse_window(text: str | None, length: int) -> int | None:
    """Window flag: absolute radius ("16"), percentage ("5%"), or "full"."""
    if text is None or text.lower() in ("full", "none", "unconstrained"):
        return None
    text = text.strip()
    if text.endswith("%"):
        return window_from_percent(float(text[:-1]) / 100.0, length)
    return int(text)


def _load_dataset(path, normalize: bool) -> LabeledDataset:
    ds = load_ucr_tsv(path)
    return ds.normalized() if normalize else ds


def _write_codes(path, labels, codes) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for label, row in zip(labels, codes):
            fh.write(label + "\t" + "\t".join(str(int(v)) for v in row) + "\n")


def read_codes(path) -> tuple[list[str], np.ndarray]:
    labels = []
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            labels.append(fields[0])
            rows.append([int(v) for v in fields[1:]])
    return labels, np.asarray(rows, dtype=np.int64)


def cmd_train(args) -> int:
    ds = _load_dataset(args.dataset, not args.no_normalize)
    window = parse_window(args.window, ds.length // args.subspaces + (args.tail or 0))
    if args.centroids > ds.n:
        print(
            f"note: codebook size {args.centroids} clamped to training set size {ds.n}"
        )
    cb = codec.train(
        ds,
        n_subspaces=args.subspaces,
        n_centroids=args.centroids,
        tail=args.tail,
        wavelet_level=args.level,
        window=window,
        seed=args.seed,
    )
    codec.save(cb, args.codebook_out)
    codes = codec.encode_dataset(cb, ds)
    labels = ds.labels or ["0"] * ds.n
    _write_codes(args.codes_out, labels, codes)
    for line in codec.memory_report(cb, ds.n).lines():
        print(line)
    if args.bundle_out:
        from .service import ModelBundle, save_bundle

        if args.resample_points - 1 != ds.length:
            print(
                f"error: --resample-points {args.resample_points} implies angle "
                f"series of length {args.resample_points - 1}, but the dataset "
                f"has length {ds.length}; the served model would reject every "
                "request",
                file=sys.stderr,
            )
            return 1
        bundle = ModelBundle(
            codebook=cb,
            codes=codes,
            labels=labels,
            symbols={s: s for s in sorted(set(labels))},
            resample_points=args.resample_points,
        )
        save_bundle(bundle, args.bundle_out)
        print(f"bundle written to {args.bundle_out}")
    print(f"codebook written to {args.codebook_out}")
    print(f"codes written to {args.codes_out}")
    return 0


def cmd_encode(args) -> int:
    cb = codec.load(args.codebook)
    ds = _load_dataset(args.dataset, not args.no_normalize)
    codes = codec.encode_dataset(cb, ds)
    _write_codes(args.codes_out, ds.labels or ["0"] * ds.n, codes)
    print(f"codes written to {args.codes_out}")
    return 0


def cmd_knn(args) -> int:
    train_ds = _load_dataset(args.train, not args.no_normalize)
    test_ds = _load_dataset(args.test, not args.no_normalize)
    if train_ds.labels is None or test_ds.labels is None:
        print("error: knn needs labeled train and test sets", file=sys.stderr)
        return 1
    codebook = codes = None
    if args.measure.startswith("pq"):
        if not args.codebook:
            print("error: PQ measures need --codebook", file=sys.stderr)
            return 1
        codebook = codec.load(args.codebook)
        codes = codec.encode_dataset(codebook, train_ds)
    window = parse_window(args.window, train_ds.length)
    ks = (1, 3, 10, 20)
    results = []
    started = time.perf_counter()
    for row in test_ds.values:
        results.append(
            knn_classify(
                train_ds,
                row,
                k=train_ds.n,
                measure=args.measure,
                window=window,
                codebook=codebook,
                codes=codes,
            )
        )
    elapsed = time.perf_counter() - started
    acc = topk_accuracy(results, test_ds.labels, ks)
    print("measure," + ",".join(f"top{k}" for k in ks) + ",total_s,mean_ms")
    print(
        args.measure
        + ","
        + ",".join(f"{acc[k]:.4f}" for k in ks)
        + f",{elapsed:.3f},{1000.0 * elapsed / test_ds.n:.3f}"
    )
    return 0


def cmd_cluster(args) -> int:
    ds = _load_dataset(args.dataset, not args.no_normalize)
    if ds.n < 2:
        print("error: need at least 2 series to cluster", file=sys.stderr)
        return 1
    codebook = None
    if args.measure == "pq-sym":
        if not args.codebook:
            print("error: measure pq-sym needs --codebook", file=sys.stderr)
            return 1
        codebook = codec.load(args.codebook)
    window = parse_window(args.window, ds.length)
    matrix = mining.pairwise_matrix(
        ds,
        measure=args.measure,
        window=window,
        codebook=codebook,
        lb_replace=args.lb_replace,
    )
    dend = mining.agglomerative(matrix, linkage=args.linkage)
    k = args.clusters or (len(set(ds.labels)) if ds.labels else 2)
    labels = mining.cut_k(dend, k)
    with open(args.labels_out, "w", encoding="utf-8") as fh:
        fh.write("index,cluster\n")
        for i, c in enumerate(labels):
            fh.write(f"{i},{int(c)}\n")
    print(f"cluster labels written to {args.labels_out}")
    if ds.labels is not None:
        ri = mining.rand_index(labels, ds.labels)
        ari = mining.adjusted_rand_index(labels, ds.labels)
        print(f"rand_index,{ri:.4f}")
        print(f"adjusted_rand_index,{ari:.4f}")
    return 0


def random_walks(n_series: int, length: int, seed: int) -> np.ndarray:
    """Seeded Gaussian random walks, z-normalized per series."""
    rng = np.random.default_rng(seed)
    walks = np.cumsum(rng.standard_normal((n_series, length)), axis=1)
    mu = walks.mean(axis=1, keepdims=True)
    sd = walks.std(axis=1, keepdims=True)
    sd[sd < 1e-12] = 1.0
    return (walks - mu) / sd


def warm_kernels() -> None:
    """Trigger JIT compilation on tiny inputs so timings exclude compile cost."""
    _kernels.warm()


def bench_randomwalk(n_series: int, length: int, subspace_percent: float,
                     n_centroids: int, seed: int, window: str | None = "10%",
                     tail: int = 0) -> dict:
    """Time a full pairwise matrix under exact DTW vs the quantized pipeline
    (encode + symmetric distances; training timed separately)."""
    walks = random_walks(n_series, length, seed)
    n_subspaces = max(1, int(round(100.0 / subspace_percent)))
    warm_kernels()

    started = time.perf_counter()
    dtw_matrix = np.sqrt(_kernels.pairwise_dtw_sq(walks, length))
    t_dtw = time.perf_counter() - started

    seg_len = length // n_subspaces + tail
    quant_window = parse_window(window, seg_len)
    started = time.perf_counter()
    cb = codec.train(
        walks,
        n_subspaces=n_subspaces,
        n_centroids=n_centroids,
        tail=tail,
        window=quant_window,
        seed=seed,
    )
    t_train = time.perf_counter() - started

    started = time.perf_counter()
    codes = codec.encode_dataset(cb, walks)
    t_encode = time.perf_counter() - started

    started = time.perf_counter()
    pq_matrix = codec.sym_pairwise(cb, codes)
    t_sym = time.perf_counter() - started

    t_pq = t_encode + t_sym
    return {
        "n_series": n_series,
        "length": length,
        "n_subspaces": n_subspaces,
        "n_centroids": cb.n_centroids,
        "t_dtw_s": t_dtw,
        "t_train_s": t_train,
        "t_encode_s": t_encode,
        "t_sym_s": t_sym,
        "t_pq_s": t_pq,
        "speedup": t_dtw / t_pq if t_pq > 0 else math.inf,
        "mean_abs_error": float(np.mean(np.abs(dtw_matrix - pq_matrix))),
    }


def cmd_bench_randomwalk(args) -> int:
    stats = bench_randomwalk(
        args.n_series,
        args.length,
        args.subspace_percent,
        args.centroids,
        args.seed,
        window=args.window,
        tail=args.tail,
    )
    print(",".join(stats.keys()))
    print(",".join(f"{v:.4f}" if isinstance(v, float) else str(v) for v in stats.values()))
    print(f"speedup: {stats['speedup']:.2f}x (encode {stats['t_encode_s']:.2f}s reported separately; train {stats['t_train_s']:.2f}s excluded as a one-time cost)")
    return 0


def cmd_detexify_prepare(args) -> int:
    with open(args.strokes, "r", encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        print("error: stroke file must be a JSON array of records", file=sys.stderr)
        return 1
    per_symbol: dict[str, int] = {}
    rows = []
    labels = []
    skipped = 0
    for rec in records:
        try:
            label = str(rec["label"])
            strokes = [
                Stroke(
                    np.array([p["x"] for p in s], dtype=np.float64),
                    np.array([p["y"] for p in s], dtype=np.float64),
                    np.array([p["t"] for p in s], dtype=np.float64),
                )
                for s in rec["strokes"]
            ]
            if per_symbol.get(label, 0) >= args.max_per_symbol:
                continue
            rows.append(preprocess(strokes, args.resample_points))
            labels.append(label)
            per_symbol[label] = per_symbol.get(label, 0) + 1
        except (KeyError, TypeError, ValueError) as exc:
            skipped += 1
            continue
    if skipped:
        print(f"skipped {skipped} malformed records")
    if not rows:
        print("error: no usable records", file=sys.stderr)
        return 1
    from .series import save_ucr_tsv

    save_ucr_tsv(LabeledDataset(np.stack(rows), labels), args.out)
    print(f"{len(rows)} series ({len(per_symbol)} symbols) written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    model = args.model or os.environ.get("PQDTW_MODEL")
    if not model:
        print("error: pass --model or set PQDTW_MODEL", file=sys.stderr)
        return 1
    port = args.port or int(os.environ.get("PQDTW_PORT", "8000"))
    serve(model, host=args.host, port=port)
    return 0


def cmd_gridsearch(args) -> int:
    ds = _load_dataset(args.dataset, not args.no_normalize)
    if ds.labels is None:
        print("error: gridsearch needs a labeled dataset", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(ds.n)
    folds = np.array_split(order, 5)

    def accuracy(m, tail, level, window_text) -> float:
        hits = 0
        total = 0
        for f in range(5):
            val_idx = folds[f]
            tr_idx = np.concatenate([folds[g] for g in range(5) if g != f])
            tr = LabeledDataset(ds.values[tr_idx], [ds.labels[i] for i in tr_idx])
            seg_len = ds.length // m + tail
            window = parse_window(window_text, seg_len)
            cb = codec.train(
                tr, n_subspaces=m, n_centroids=args.centroids, tail=tail,
                wavelet_level=level, window=window, seed=args.seed,
            )
            codes = codec.encode_dataset(cb, tr)
            for i in val_idx:
                res = knn_classify(
                    tr, ds.values[i], k=1, measure="pq-sym",
                    codebook=cb, codes=codes,
                )
                hits += res.neighbors[0][0] == ds.labels[i]
                total += 1
        return hits / total

    print("subspaces,tail,level,window,cv_accuracy")
    best = None
    for m in args.subspace_grid:
        base = ds.length // m
        if base < 2:
            continue
        for tail in args.tail_grid:
            if tail >= base:
                continue
            for level in args.level_grid:
                if 2**level > ds.length:
                    continue
                for window_text in args.window_grid:
                    acc = accuracy(m, tail, level, window_text)
                    print(f"{m},{tail},{level},{window_text},{acc:.4f}")
                    if best is None or acc > best[0]:
                        best = (acc, m, tail, level, window_text)
    if best:
        print(
            f"best: subspaces={best[1]} tail={best[2]} level={best[3]} "
            f"window={best[4]} accuracy={best[0]:.4f}"
        )
    return 0


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqdtw",
        description="Elastic product quantization for time series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-normalize", action="store_true",
                       help="skip per-series z-normalization on load")

    p = sub.add_parser("train", help="fit a codebook and encode the training set")
    p.add_argument("dataset")
    p.add_argument("--subspaces", "-m", type=int, required=True)
    p.add_argument("--centroids", "-k", type=int, default=256)
    p.add_argument("--tail", type=int, default=None)
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--window", default="10%")
    p.add_argument("--codebook-out", default="codebook.json")
    p.add_argument("--codes-out", default="codes.tsv")
    p.add_argument("--bundle-out", default=None)
    p.add_argument("--resample-points", type=int, default=DEFAULT_RESAMPLE)
    add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("encode", help="encode a dataset with an existing codebook")
    p.add_argument("dataset")
    p.add_argument("--codebook", required=True)
    p.add_argument("--codes-out", default="codes.tsv")
    add_common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("knn", help="top-k accuracy of a measure on a train/test split")
    p.add_argument("train")
    p.add_argument("test")
    p.add_argument("--measure", choices=mining.MEASURES, default="dtw")
    p.add_argument("--window", default=None,
                   help="full-series window for ed/dtw; PQ measures use the "
                        "codebook's quantization window")
    p.add_argument("--codebook", default=None)
    add_common(p)
    p.set_defaults(func=cmd_knn)

    p = sub.add_parser("cluster", help="hierarchical clustering with RI/ARI scoring")
    p.add_argument("dataset")
    p.add_argument("--measure", choices=("ed", "dtw", "pq-sym"), default="dtw")
    p.add_argument("--linkage", choices=mining.LINKAGES, default="complete")
    p.add_argument("--clusters", type=int, default=None,
                   help="default: number of distinct labels")
    p.add_argument("--window", default=None)
    p.add_argument("--codebook", default=None)
    p.add_argument("--lb-replace", action="store_true")
    p.add_argument("--labels-out", default="clusters.csv")
    add_common(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("bench-randomwalk", help="DTW vs PQDTW runtime on random walks")
    p.add_argument("--n-series", type=int, default=100)
    p.add_argument("--length", type=int, default=1600)
    p.add_argument("--subspace-percent", type=float, default=20.0)
    p.add_argument("--centroids", "-k", type=int, default=256)
    p.add_argument("--tail", type=int, default=0)
    p.add_argument("--window", default="10%")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench_randomwalk)

    p = sub.add_parser("detexify-prepare", help="convert stroke JSON to an angle-series dataset")
    p.add_argument("strokes")
    p.add_argument("--out", default="angles.tsv")
    p.add_argument("--max-per-symbol", type=int, default=1000000)
    p.add_argument("--resample-points", type=int, default=DEFAULT_RESAMPLE)
    p.set_defaults(func=cmd_detexify_prepare)

    p = sub.add_parser("serve", help="run the classification HTTP service")
    p.add_argument("--model", default=None, help="bundle path (or PQDTW_MODEL)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None, help="port (or PQDTW_PORT)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("gridsearch", help="grid over (M, tail, level, window) with 5-fold CV")
    p.add_argument("dataset")
    p.add_argument("--subspace-grid", type=_int_list, default=[2, 4, 8])
    p.add_argument("--tail-grid", type=_int_list, default=[0, 2, 4])
    p.add_argument("--level-grid", type=_int_list, default=[2, 3])
    p.add_argument("--window-grid", type=lambda s: s.split(","), default=["10%", "full"])
    p.add_argument("--centroids", "-k", type=int, default=256)
    add_common(p)
    p.set_defaults(func=cmd_gridsearch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
