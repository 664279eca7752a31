"""Run every experiment script in sequence and index the reports.

Each run writes under ``nlw_out/``; the exit status is nonzero if any
experiment misses its pass criterion.
"""

import runpy
import sys
from pathlib import Path

from nlw_lab.cli import main

SCRIPTS = [
    "critical_scaling", "subcritical_scaling_3d", "subcritical_scaling_2d", "kss_uniformity",
    "chain_rule_study", "trace_study", "strichartz_2d", "persistence_2d",
]

if __name__ == "__main__":
    here = Path(__file__).parent
    worst = 0
    for name in SCRIPTS:
        preset = runpy.run_path(str(here / f"{name}.py"))["PRESET"]
        code = main(preset + sys.argv[1:])
        print(f"\n{name}: exit {code}", flush=True)
        worst = max(worst, code)
    worst = max(worst, main(["report", "--inputs", "nlw_out", "--out", "nlw_out/index"]))
    sys.exit(worst)
