"""
Four bases in dimension six
===========================

No run finds four mutually unbiased bases in d = 6.  The final values cluster
at a few local minima, the lowest near 0.05125.  The default 100 trials take
about a minute; raise ``TRIALS`` for a sharper histogram.
"""

import sys

from mubsearch import SearchConfig, run_search

TRIALS = int(sys.argv[1]) if len(sys.argv) > 1 else 100

report = run_search(SearchConfig(d=6, n_bases=3, trials=TRIALS, base_seed=6))
print(f"successes: {report.success_count}/{TRIALS}")
print(f"lowest value: {report.min_objective:.6f}")
print(f"modal bin {report.modal_bin}: {report.modal_fraction:.0%} of runs")

# %%
# Text histogram of the minima in bins of width 0.005.
scale = 60 / max(b.count for b in report.histogram)
for b in report.histogram:
    if b.count:
        print(f"[{b.lower:.3f}, {b.upper:.3f})  {b.count:5d}  {'#' * round(b.count * scale)}")
