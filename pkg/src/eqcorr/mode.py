"""Windowed mode estimation for contamination-style location problems.

The estimator slides a closed window of half-width h over the sorted
sample, finds a position covering the most points, and returns the
midpoint of the covered span. At h = 0 it degenerates to the exact
majority value. Both the sweep and the degenerate case break ties toward
smaller values, so the estimate is a deterministic function of the sample.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModeEstimate",
    "BandwidthRule",
    "kernel_mode",
    "kernel_mode_correlated",
    "bandwidth",
    "sample_median",
]


@dataclass
class ModeEstimate:
    """Located window: center, closed interval, points covered, h used."""

    mu_hat: float
    window: tuple
    count: int
    h_used: float


@dataclass
class BandwidthRule:
    """Constants of the bandwidth formula

        h = c1 * sqrt(noise_var * (max(1, log(l_delta * p / (p - 2s)^2)) + loglog_term)).
    """

    c1: float = 1.0
    l_delta: float = math.e
    loglog_term: float = 0.0

    def __post_init__(self):
        if self.c1 <= 0.0:
            raise ValueError("c1 must be positive")
        if self.l_delta < 1.0:
            raise ValueError("l_delta must be at least 1")


def kernel_mode(y, h):
    """Maximal-count window estimate of the location of a sample.

    Parameters
    ----------
    y : array-like, shape (p,)
    h : float
        Window half-width, nonnegative. ``h = 0`` returns the most frequent
        exact value (smallest such value on ties).

    Returns
    -------
    ModeEstimate
        ``count`` is exactly the number of sample points in the returned
        closed window, and no window of half-width h covers more.
    """
    y = np.asarray(y, dtype=float)
    p = y.shape[0]
    if p < 1:
        raise ValueError("y must be nonempty")
    if h < 0.0 or not math.isfinite(h):
        raise ValueError("h must be a nonnegative real")

    if h == 0.0:
        vals, counts = np.unique(y, return_counts=True)
        i = int(np.argmax(counts))  # first maximum: smallest value
        mu = float(vals[i])
        return ModeEstimate(mu_hat=mu, window=(mu, mu), count=int(counts[i]), h_used=0.0)

    ys = np.sort(y)
    # for each left index i, the largest j with ys[j] <= ys[i] + 2h
    j = np.searchsorted(ys, ys + 2.0 * h, side="right") - 1
    counts = j - np.arange(p) + 1
    i = int(np.argmax(counts))  # first maximum: leftmost richest window
    mu = 0.5 * (float(ys[i]) + float(ys[j[i]]))
    return ModeEstimate(
        mu_hat=mu, window=(mu - h, mu + h), count=int(counts[i]), h_used=float(h)
    )


def kernel_mode_correlated(x, h):
    """Location estimate from pairwise mean-differences of a correlated sample.

    Applies the windowed mode to (mean(x) - x_i); the shared noise
    component cancels coordinatewise, so no decorrelation draw is needed.
    """
    x = np.asarray(x, dtype=float)
    return kernel_mode(x.mean() - x, h)


def bandwidth(p, s, noise_var, rule=None):
    """Window half-width for a p-sample with at most s outliers.

    Requires s < p / 2. The logarithmic body is floored at 1 so the width
    never collapses in the well-separated regime.
    """
    rule = rule if rule is not None else BandwidthRule()
    if not 1 <= s:
        raise ValueError("s must be positive")
    if 2 * s >= p:
        raise ValueError("bandwidth requires s < p / 2")
    if noise_var < 0.0:
        raise ValueError("noise_var must be nonnegative")
    d = p - 2 * s
    body = max(1.0, math.log(rule.l_delta * p / (d * d))) + rule.loglog_term
    return rule.c1 * math.sqrt(noise_var * body)


def sample_median(y):
    """Lower median: sorted[(p - 1) // 2]."""
    y = np.asarray(y, dtype=float)
    if y.shape[0] < 1:
        raise ValueError("y must be nonempty")
    return float(np.sort(y)[(y.shape[0] - 1) // 2])
