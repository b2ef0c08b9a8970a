#!/usr/bin/env python3
"""Generate the loss-sweep error curves (CSV) into results/.

Usage: python scripts/run_loss_sweep.py [extra dualrail sweep-loss flags]
"""

import pathlib
import sys

from dualrail.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results" / "loss_sweep.csv"


if __name__ == "__main__":
    OUT.parent.mkdir(exist_ok=True)
    argv = ["sweep-loss", "--out", str(OUT), *sys.argv[1:]]
    code = main(argv)
    print(f"wrote {OUT}" if code == 0 else "sweep-loss failed", file=sys.stderr)
    raise SystemExit(code)
