#!/usr/bin/env python3
"""Build a desk-scale demo model bundle from synthetic symbols.

Produces everything the sketch UI needs to run without the real training
data: a stroke dataset, a trained bundle, and one training drawing to replay.

Usage: python scripts/make_demo_model.py OUTDIR [--classes 20] [--per-class 50]
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from demo_symbols import make_symbol_strokes, symbol_name, write_dataset_json

from pqdtw.cli import main as cli_main


def build(outdir: Path, n_classes: int, per_class: int, seed: int = 0) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    strokes_json = outdir / "symbols.json"
    write_dataset_json(strokes_json, n_classes=n_classes, per_class=per_class)

    angles_tsv = outdir / "angles.tsv"
    rc = cli_main(
        ["detexify-prepare", str(strokes_json), "--out", str(angles_tsv)]
    )
    assert rc == 0, "detexify-prepare failed"

    rc = cli_main(
        [
            "train",
            str(angles_tsv),
            "--subspaces", "4",
            "--centroids", "256",
            "--tail", "2",
            "--window", "20%",
            "--seed", str(seed),
            # angle series share a natural scale; normalizing would discard
            # the mean heading, i.e. the symbol's rotation
            "--no-normalize",
            "--codebook-out", str(outdir / "codebook.json"),
            "--codes-out", str(outdir / "codes.tsv"),
            "--bundle-out", str(outdir / "bundle.json"),
        ]
    )
    assert rc == 0, "train failed"

    replay = {
        "symbol": symbol_name(0),
        "strokes": make_symbol_strokes(0, 0),
    }
    (outdir / "replay.json").write_text(json.dumps(replay))
    print(f"demo model written to {outdir}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--classes", type=int, default=20)
    parser.add_argument("--per-class", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    build(args.outdir, args.classes, args.per_class, args.seed)
