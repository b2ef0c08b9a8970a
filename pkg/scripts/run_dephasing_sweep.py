#!/usr/bin/env python3
"""Generate the dephasing-sweep error curves (CSV) into results/.

Usage: python scripts/run_dephasing_sweep.py [extra dualrail sweep-dephasing flags]
"""

import pathlib
import sys

from dualrail.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results" / "dephasing_sweep.csv"


if __name__ == "__main__":
    OUT.parent.mkdir(exist_ok=True)
    argv = ["sweep-dephasing", "--out", str(OUT), *sys.argv[1:]]
    code = main(argv)
    print(f"wrote {OUT}" if code == 0 else "sweep-dephasing failed", file=sys.stderr)
    raise SystemExit(code)
