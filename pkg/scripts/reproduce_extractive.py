#!/usr/bin/env python3
"""Score the three extractive baselines on a released test split and compare
with the published numbers.

    python3 scripts/reproduce_extractive.py /path/to/test.jsonl [--stem] [--out DIR]

The input is JSON lines with ``src`` (abstract) and ``tgt`` (citation
sentence) fields; rows without an ``example_id`` are keyed by line number.
"""

import argparse
import contextlib
import csv
import io
import sys
import tempfile
from pathlib import Path

from citetldr.cli import main as cli

PUBLISHED = {
    "lead": (21.94, 7.35, 17.36),
    "heuristic": (29.32, 12.53, 23.99),
    "oracle": (44.17, 27.22, 38.32),
}
TOLERANCE = 1.5


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("test_file")
    ap.add_argument("--stem", action="store_true", help="Porter-stem tokens before scoring")
    ap.add_argument("--out", help="keep predictions and reports here")
    args = ap.parse_args(argv)

    out = Path(args.out or tempfile.mkdtemp(prefix="extractive-"))
    out.mkdir(parents=True, exist_ok=True)
    stem = ["--stem"] if args.stem else []
    ok = True
    print(f"{'system':<10} {'R-1':>14} {'R-2':>14} {'R-L':>14}")
    for name, published in PUBLISHED.items():
        preds = out / f"{name}.jsonl"
        with contextlib.redirect_stdout(io.StringIO()):
            rc = cli(["baseline", name, "--input", args.test_file, "--output", str(preds), *stem])
            rc = rc or cli(["eval", "--predictions", str(preds), "--references", args.test_file, "--name", name,
                            "--output-prefix", str(out / name), *stem])
        if rc:
            return 2
        (row,) = list(csv.DictReader(open(out / f"{name}.csv")))
        got = [float(row[k]) for k in ("R-1", "R-2", "R-L")]
        cells = []
        for g, p in zip(got, published):
            ok &= abs(g - p) <= TOLERANCE
            cells.append(f"{g:6.2f} ({p:5.2f})")
        print(f"{name:<10} " + " ".join(f"{c:>14}" for c in cells))
    print(f"within +/-{TOLERANCE}: {'yes' if ok else 'no'}; outputs in {out}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
