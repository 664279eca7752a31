"""2-D radial Strichartz ratios and their stability in the horizon.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["ineq-strichartz", "--q", "2.5,3,4,6", "--T-big", "16", "--out", "nlw_out/strichartz"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
