"""
Rate regimes across sparsity and correlation
============================================

The squared-error rate for estimating an s-sparse theta from one
equicorrelated observation has three regimes: a dense regime where
nothing beats returning the data, a sparse regime scaling like
(1 - gamma) s log(ep / s), and a near-half regime where the rate is
driven by the gap d = p - 2s. This script prints the regime table for
a few cells and draws the full phase portrait over s for several
correlation levels.

Run from the repository root:

    python3 demos/rate_regimes.py

Outputs land in demos/out/.
"""

import csv
import os

import numpy as np

from eqcorr.model import minimax_rate_sq, two_groups_rate_sq
from eqcorr.svgplot import line_plot, write_svg

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

# --- a few table cells first ------------------------------------------------

print("rate table, p = 100")
print("%6s %8s %14s" % ("s", "gamma", "rate^2"))
for s in (1, 10, 30, 48, 60):
    for gamma in (0.0, 0.5, 0.9, 1.0):
        print("%6d %8.2f %14.6f" % (s, gamma, minimax_rate_sq(100, s, gamma)))

# At gamma = 1 the shared noise is a single scalar, so everything off the
# dense regime is recoverable exactly and the rate collapses to the
# perfect-correlation curve: 0 when p > 2s, p otherwise.
print()
print("perfect correlation: rate(100, 10, 1) = %g, rate(100, 60, 1) = %g"
      % (minimax_rate_sq(100, 10, 1.0), minimax_rate_sq(100, 60, 1.0)))

# The two-groups model has no shared scalar to exploit; its rate stays
# finite only below s < p/2 and never collapses.
print("two-groups:          rate(100, 10, sigma=1) = %g"
      % two_groups_rate_sq(100, 10, 1.0))

# --- full phase portrait over s ---------------------------------------------

p = 100
ss = np.arange(1, p)
gammas = (0.0, 0.5, 0.9, 0.99, 1.0)

csv_path = os.path.join(out_dir, "rate_portrait.csv")
with open(csv_path, "w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["s"] + ["gamma=%g" % g for g in gammas])
    for s in ss:
        w.writerow([s] + ["%.17g" % minimax_rate_sq(p, int(s), g) for g in gammas])
print()
print("wrote %s" % csv_path)

series = []
for g in gammas:
    ys = [minimax_rate_sq(p, int(s), g) for s in ss]
    series.append(("gamma=%g" % g, ss.tolist(), ys))
svg = line_plot(
    series,
    title="squared-error rate over sparsity, p = %d" % p,
    xlabel="s",
    ylabel="rate^2",
)
svg_path = write_svg(os.path.join(out_dir, "rate_portrait.svg"), svg)
print("wrote %s" % svg_path)

# The kinks are the regime boundaries: the sparse regime ends where
# (p - 2s)^2 drops below 4p, and the dense plateau starts at s = p/2.
boundary = max(s for s in ss if 2 * s < p and (p - 2 * s) ** 2 >= 4 * p)
print("sparse regime ends at s = %d; dense plateau starts at s = %d" % (boundary, p // 2))
