#!/usr/bin/env python3
"""Compare the numba-compiled kernels against the pure-numpy fallback.

Runs the same kernel workload in two subprocesses, one with PQDTW_NO_NUMBA=1,
and prints a timing table plus a cross-backend agreement check. The fallback
executes the identical function bodies uncompiled, so results must match
bit-for-bit.

Usage: python benchmarks/compare_backends.py [--n-series 40] [--length 256]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import sys
import time

import numpy as np

from pqdtw import _kernels

n_series, length = int(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
data = np.cumsum(rng.standard_normal((n_series, length)), axis=1)
radius = max(1, length // 10)

# warm-up triggers JIT compilation when numba is active
_kernels.pairwise_dtw_sq(data[:2], radius)
upper, lower = _kernels.envelope(data[0], radius)

timings = {}
started = time.perf_counter()
matrix = _kernels.pairwise_dtw_sq(data, radius)
timings["pairwise_dtw"] = time.perf_counter() - started

uppers = np.empty_like(data)
lowers = np.empty_like(data)
started = time.perf_counter()
for i in range(n_series):
    uppers[i], lowers[i] = _kernels.envelope(data[i], radius)
timings["envelopes"] = time.perf_counter() - started

started = time.perf_counter()
for i in range(n_series):
    _kernels.nn_cascade(data[i], data, uppers, lowers, radius)
timings["nn_cascade"] = time.perf_counter() - started

started = time.perf_counter()
_kernels.dba_accumulate(data[0], data, radius)
timings["dba_accumulate"] = time.perf_counter() - started

print(json.dumps({
    "numba": _kernels.USE_NUMBA,
    "timings": timings,
    "checksum": float(matrix.sum()),
}))
"""


def run(no_numba: bool, n_series: int, length: int) -> dict:
    env = dict(os.environ)
    env["PQDTW_NO_NUMBA"] = "1" if no_numba else "0"
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(n_series), str(length)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-series", type=int, default=40)
    parser.add_argument("--length", type=int, default=256)
    args = parser.parse_args()

    jit = run(False, args.n_series, args.length)
    plain = run(True, args.n_series, args.length)
    assert jit["numba"] and not plain["numba"], "backend selection failed"

    print(f"workload: {args.n_series} series of length {args.length}")
    print(f"{'kernel':<16}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name in jit["timings"]:
        a = jit["timings"][name]
        b = plain["timings"][name]
        print(f"{name:<16}{a:>12.4f}{b:>12.4f}{b / a:>9.1f}x")
    match = jit["checksum"] == plain["checksum"]
    print(f"pairwise checksum identical across backends: {match}")
    return 0 if match else 1


if __name__ == "__main__":
    sys.exit(main())
