"""Chain-rule max ratios over (weight, s, p), plus the corollary configuration.

Extra command-line arguments are appended to the preset, so e.g. ``--out DIR``
or ``--jobs 4`` override the defaults below.
"""

import sys

from nlw_lab.cli import main

PRESET = ["ineq-chain", "--case", "study", "--size", "50", "--out", "nlw_out/chain_study"]

if __name__ == "__main__":
    sys.exit(main(PRESET + sys.argv[1:]))
