"""2-D radial persistence for p=4: small data reach t_max=100, norm linear in eps.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["persist-2d", "--p", "4", "--eps", "0.05,0.1", "--t-max", "100", "--out", "nlw_out/persistence"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
