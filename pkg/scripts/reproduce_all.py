#!/usr/bin/env python3
"""Rebuild every experiment report from scratch.

Thin wrapper over ``pifmap reproduce all``: a fresh checkout regenerates
all tables, per-seed CSVs, and box plots under ./reports with one
command.  Extra arguments pass straight through, so e.g.

    python3 scripts/reproduce_all.py --seeds 1:5 --n 200 --out /tmp/r

runs a quick reduced-size sweep.
"""

import sys

from pifmap.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", "all", *sys.argv[1:]]))
