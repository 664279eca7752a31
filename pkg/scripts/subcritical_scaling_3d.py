"""Subcritical lifespan exponent for n=3, p=1.5 (expected slope -1).

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["scaling", "--n", "3", "--p", "1.5", "--s", "1.75", "--eps", "0.2,0.12,0.08,0.05,0.03",
          "--t-max", "2000", "--out", "nlw_out/subcritical_3d"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
