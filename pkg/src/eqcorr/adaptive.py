"""Adaptation to an unknown correlation level.

``estimate_correlation`` scans random small subsets of coordinates and
takes the minimal subset sample variance as an estimate of 1 - gamma: a
subset that avoids every signal coordinate sees only the idiosyncratic
noise, and the minimum over many subsets finds such a subset with high
probability. ``lepski_projection`` and ``lepski_linear`` then select a
sparsity level from a geometric grid by the usual ball-intersection
witness rule, and ``adaptive_estimate`` combines the two into a full
signal estimate that never sees the true gamma or sparsity.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .decorrelate import design_apply
from .lasso import LassoConfig, lambda_rule, solve_lasso
from .mode import kernel_mode_correlated

__all__ = [
    "CorrelationEstimate",
    "LepskiConfig",
    "LepskiTrace",
    "estimate_correlation",
    "default_subset_params",
    "lepski_projection",
    "lepski_linear",
    "adaptive_estimate",
]

# rows drawn per vectorized block; fixed so the generator stream consumed by
# redraws is reproducible for a given (m, ell)
_CHUNK_ROWS = 262144


@dataclass
class CorrelationEstimate:
    """Minimum subset variance and the subset that attained it.

    ``one_minus_gamma_hat`` is clamped below at 0 and unclamped above.
    ``best_subset`` holds the winning index set so the variance can be
    recomputed, and ``best_subset_seed`` its position in the draw stream.
    """

    one_minus_gamma_hat: float
    m: int
    ell: int
    best_subset: tuple
    best_subset_seed: int


@dataclass
class LepskiConfig:
    """Constants of the adaptive selectors.

    ``eta`` is the nominal confidence level the default constants were
    calibrated for; it enters only through them. ``l_eta`` inflates the
    estimated noise variance, ``k_const``/``r_const``/``c_eta`` scale the
    exceptional-set exponent, the ball radii, and the mode-branch
    threshold, and ``c1`` scales the adaptive bandwidth.
    """

    eta: float = 0.05
    l_eta: float = 2.0
    k_const: float = 4.0
    r_const: float = 8.0
    c_eta: float = 16.0
    c1: float = 1.0
    regime_divisor: float = 784.0

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.l_eta < 1.0:
            raise ValueError("l_eta must be at least 1")
        for name in ("k_const", "r_const", "c_eta", "c1"):
            if getattr(self, name) <= 0.0:
                raise ValueError("%s must be positive" % name)
        if self.regime_divisor < 1.0:
            raise ValueError("regime_divisor must be at least 1")


@dataclass
class LepskiTrace:
    """Per-candidate record of one selector run.

    ``scales`` holds the penalty (lasso candidates) or bandwidth (mode
    candidates) used at each grid point, ``checks`` the ball-membership
    tests the selected witness passed. ``estimates`` keeps the candidate
    estimates themselves (vectors for the projection selector, floats for
    the linear one); they are omitted from the JSON form when vectors.
    """

    kind: str
    grid: list
    branches: list
    scales: list
    radii: list
    estimates: list
    selected_s: int
    witness_index: int
    checks: list
    one_minus_gamma_hat: float

    def to_json(self):
        d = {
            "kind": self.kind,
            "grid": [int(s) for s in self.grid],
            "branches": list(self.branches),
            "scales": [None if v is None else float(v) for v in self.scales],
            "radii": [None if v is None else float(v) for v in self.radii],
            "selected_s": int(self.selected_s),
            "witness_index": int(self.witness_index),
            "checks": self.checks,
            "one_minus_gamma_hat": float(self.one_minus_gamma_hat),
        }
        if self.kind == "linear":
            d["estimates"] = [float(v) for v in self.estimates]
        return json.dumps(d)


# ---------------------------------------------------------------------------
# correlation level
# ---------------------------------------------------------------------------

def _distinct_rows(rng, n, ell, p):
    idx = rng.integers(0, p, size=(n, ell), dtype=np.int32)
    idx.sort(axis=1)
    rows = np.flatnonzero((idx[:, 1:] == idx[:, :-1]).any(axis=1))
    while rows.size:
        sub = rng.integers(0, p, size=(rows.size, ell), dtype=np.int32)
        sub.sort(axis=1)
        idx[rows] = sub
        rows = rows[(sub[:, 1:] == sub[:, :-1]).any(axis=1)]
    return idx


def estimate_correlation(x, m, ell, rng):
    """Estimate 1 - gamma as the minimal variance over m random ell-subsets.

    Subsets are drawn uniformly over distinct index sets (duplicate rows
    are redrawn). Each subset variance is computed after shifting by the
    subset's first element, so a subset of exactly equal values yields
    0.0 with no rounding residue, which makes the gamma = 1 case exact.

    Returns
    -------
    CorrelationEstimate
    """
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if not 2 <= ell <= p:
        raise ValueError("ell must satisfy 2 <= ell <= p")
    if m < 1:
        raise ValueError("m must be positive")

    best = math.inf
    best_row = -1
    best_subset = None
    done = 0
    while done < m:
        n = min(_CHUNK_ROWS, m - done)
        idx = _distinct_rows(rng, n, ell, p)
        w = x[idx]
        first = w[:, 0].copy()
        w -= first[:, None]
        s1 = w.sum(axis=1)
        s2 = np.einsum("ij,ij->i", w, w)
        var = (s2 - s1 * s1 / ell) / (ell - 1)
        i = int(np.argmin(var))
        if var[i] < best:
            best = float(var[i])
            best_row = done + i
            best_subset = tuple(int(t) for t in idx[i])
        done += n

    return CorrelationEstimate(
        one_minus_gamma_hat=max(best, 0.0),
        m=m,
        ell=ell,
        best_subset=best_subset,
        best_subset_seed=best_row,
    )


def default_subset_params(p):
    """Default (ell, m): ell = max(6, ceil(log3 p) + 2), m = min(50 * 3^ell, 1e6).

    The base-3 ceiling is computed by integer comparison so exact powers of
    three are never rounded up.
    """
    if p < 8:
        raise ValueError("default subset parameters require p >= 8")
    k = 0
    v = 1
    while v < p:
        v *= 3
        k += 1
    ell = max(6, k + 2)
    m = min(50 * 3 ** ell, 10 ** 6)
    return ell, m


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def _sparse_grid(p, divisor):
    out = []
    k = 0
    while (2 ** k) * divisor <= p:
        out.append(2 ** k)
        k += 1
    return out


def _projection_grid(p, divisor):
    return sorted(set(_sparse_grid(p, divisor)) | {p})


def _linear_grid(p, divisor):
    # near-dense rungs p//2 - 2^k for 2^(4k) >= p and 2^(2k) <= p, found by
    # integer comparisons to dodge float log edge cases at exact powers
    k4 = 1
    while 2 ** (4 * k4) < p:
        k4 += 1
    ks = 0
    while 2 ** (2 * (ks + 1)) <= p:
        ks += 1
    mid = [p // 2 - 2 ** k for k in range(k4, ks + 1)]
    return sorted(set(_sparse_grid(p, divisor)) | set(mid) | {p // 2 - 1, p}), k4


# ---------------------------------------------------------------------------
# selectors
# ---------------------------------------------------------------------------

def _select_witness(grid, estimates, radii, distance, include_last):
    """Smallest grid point whose estimate sits in every larger candidate's ball."""
    last = len(grid) if include_last else len(grid) - 1
    for i in range(len(grid)):
        checks = []
        ok = True
        for j in range(last):
            if grid[j] < grid[i]:
                continue
            d = distance(estimates[i], estimates[j])
            checks.append({"s": int(grid[j]), "distance": float(d), "radius": float(radii[j])})
            if d > radii[j]:
                ok = False
                break
        if ok:
            return i, checks
    return len(grid) - 1, []


def _corr_or_default(x, rng, corr):
    if corr is not None:
        return corr
    if rng is None:
        rng = np.random.default_rng()
    ell, m = default_subset_params(x.shape[0])
    return estimate_correlation(x, m, ell, rng)


def lepski_projection(x, cfg=None, rng=None, corr=None, lasso_cfg=None):
    """Centered-signal estimate adaptive to both sparsity and correlation.

    Runs the penalized regression at every sparse grid level with the
    plug-in penalty lambda_rule(p, s, l_eta * (1 - gamma_hat)), adds the
    centered observation as a dense fallback, and returns the smallest
    grid level whose estimate lies within radius sqrt(13 s) lambda(s) of
    every sparse candidate at or above it.

    Returns
    -------
    (numpy.ndarray, LepskiTrace)
    """
    cfg = cfg if cfg is not None else LepskiConfig()
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    corr = _corr_or_default(x, rng, corr)
    nv = cfg.l_eta * corr.one_minus_gamma_hat

    grid = _projection_grid(p, cfg.regime_divisor)
    y = design_apply(p, x)
    estimates, radii, scales, branches = [], [], [], []
    for s in grid:
        if s == p:
            estimates.append(x - x.mean())
            radii.append(math.inf)  # dense fallback, excluded from ball checks
            scales.append(None)
            branches.append("dense-fallback")
        else:
            lam = lambda_rule(p, s, nv)
            sol = solve_lasso(y, lam, lasso_cfg)
            estimates.append(sol.v_hat)
            radii.append(math.sqrt(13.0 * s) * lam)
            scales.append(lam)
            branches.append("lasso")

    dist = lambda a, b: float(np.linalg.norm(a - b))
    i, checks = _select_witness(grid, estimates, radii, dist, include_last=False)
    trace = LepskiTrace(
        kind="projection",
        grid=grid,
        branches=branches,
        scales=scales,
        radii=radii,
        estimates=estimates,
        selected_s=grid[i],
        witness_index=i,
        checks=checks,
        one_minus_gamma_hat=corr.one_minus_gamma_hat,
    )
    return estimates[i].copy(), trace


def _adaptive_bandwidth(p, s, nv1g, cfg, k4):
    # exceptional-set exponent: delta_s = exp(-K min(p/(p-2s)^2, p^(1/32)))
    # on the near-dense rungs below the threshold, exp(-K) above it
    d = p - 2 * s
    if s <= p // 2 - 2 ** k4:
        arg = min(p / float(d * d), p ** (1.0 / 32.0))
    else:
        arg = 1.0
    loglog = math.log(cfg.k_const * arg)
    body = max(1.0, math.log(math.e * p / (d * d)) + loglog)
    return cfg.c1 * math.sqrt(cfg.l_eta * nv1g * body)


def lepski_linear(x, cfg=None, rng=None, corr=None, lasso_cfg=None):
    """Location estimate adaptive to sparsity and correlation.

    Candidates cover the sparse rungs (penalized-regression mean), the
    near-dense rungs p//2 - 2^k (windowed mode at the plug-in bandwidth
    when the estimated correlation permits, otherwise the sample mean) and
    the sample mean itself at s = p. The witness is the smallest grid
    level whose candidate lies inside every ball at or above it, the
    sample-mean ball included.

    Returns
    -------
    (float, LepskiTrace)
    """
    cfg = cfg if cfg is not None else LepskiConfig()
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if p < 16:
        raise ValueError("the linear selector requires p >= 16")
    corr = _corr_or_default(x, rng, corr)
    nv1g = corr.one_minus_gamma_hat
    nv = cfg.l_eta * nv1g

    grid, k4 = _linear_grid(p, cfg.regime_divisor)
    x_bar = float(x.mean())
    y = design_apply(p, x)
    estimates, radii, scales, branches = [], [], [], []
    for s in grid:
        if s == p:
            estimates.append(x_bar)
            radii.append(cfg.r_const)
            scales.append(None)
            branches.append("sample-mean")
        elif s * cfg.regime_divisor <= p:
            lam = lambda_rule(p, s, nv)
            sol = solve_lasso(y, lam, lasso_cfg)
            estimates.append(sol.beta_mean)
            radii.append(cfg.r_const * lam * math.sqrt(s / float(p)))
            scales.append(lam)
            branches.append("lasso-mean")
        else:
            d = p - 2 * s
            body = max(1.0, math.log(math.e * p / (d * d)))
            if nv1g * body <= cfg.c_eta:
                h = _adaptive_bandwidth(p, s, nv1g, cfg, k4)
                estimates.append(kernel_mode_correlated(x, h).mu_hat)
                radii.append(cfg.r_const * h)
                scales.append(h)
                branches.append("kernel-mode")
            else:
                estimates.append(x_bar)
                radii.append(cfg.r_const)
                scales.append(None)
                branches.append("sample-mean")

    dist = lambda a, b: abs(a - b)
    i, checks = _select_witness(grid, estimates, radii, dist, include_last=True)
    trace = LepskiTrace(
        kind="linear",
        grid=grid,
        branches=branches,
        scales=scales,
        radii=radii,
        estimates=estimates,
        selected_s=grid[i],
        witness_index=i,
        checks=checks,
        one_minus_gamma_hat=corr.one_minus_gamma_hat,
    )
    return estimates[i], trace


def adaptive_estimate(x, cfg=None, rng=None, return_traces=False):
    """Full signal estimate with unknown correlation and sparsity.

    Estimates the correlation level once, shares it between the projection
    and linear selectors, and returns their sum

        theta_hat = v_hat + T_hat 1.

    With ``return_traces`` the two selector traces are returned as well.
    """
    x = np.asarray(x, dtype=float)
    corr = _corr_or_default(x, rng, corr=None)
    v_hat, tr_p = lepski_projection(x, cfg, rng, corr=corr)
    t_hat, tr_l = lepski_linear(x, cfg, rng, corr=corr)
    theta_hat = v_hat + t_hat
    if return_traces:
        return theta_hat, (tr_p, tr_l)
    return theta_hat
