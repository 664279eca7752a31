"""Subcritical lifespan exponent for n=2, p=2 (expected slope -2).

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["scaling", "--n", "2", "--p", "2", "--s", "1.6", "--eps", "0.3,0.25,0.2,0.15,0.1",
          "--t-max", "2000", "--out", "nlw_out/subcritical_2d"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
