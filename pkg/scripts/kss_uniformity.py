"""T-uniformity of the local energy constants, free and forced waves.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["ineq-kss", "--T-grid", "1,4,16,64", "--families", "free,forced", "--out", "nlw_out/kss"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
