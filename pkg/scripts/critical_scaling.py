"""Critical lifespan law for n=3, p=2: ln T against 1/eps.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["scaling", "--n", "3", "--p", "2", "--s", "1.75", "--eps", "0.8,0.75,0.7,0.65,0.6",
          "--t-max", "500", "--out", "nlw_out/critical_scaling"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
