#!/usr/bin/env python3
"""Check the seeded Monte-Carlo dephasing oracle against the analytic channel.

Usage: python scripts/validate_oracles.py [extra dualrail mc-validate flags]
"""

import sys

from dualrail.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["mc-validate", *sys.argv[1:]]))
