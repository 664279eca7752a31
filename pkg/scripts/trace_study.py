"""Trace-estimate ratios for n=3, s=0.75 over a 200-member ensemble.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["ineq-trace", "--n", "3", "--s", "0.75", "--size", "200", "--out", "nlw_out/trace"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
