"""Oracle estimation pipeline: branch choice and full signal estimates.

Given the true sparsity and correlation level, the location part of the
signal is estimated by whichever of three devices is rate-optimal in that
regime: the penalized-regression mean in the sparse regime, the windowed
mode of the contamination view in the intermediate regime, and the sample
mean when the shared noise dominates. Ties go to the branch that exploits
the correlation. The centered part comes from ``estimate_projection``,
and the two add up to the full estimate.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .decorrelate import _views, decorrelate
from .lasso import LassoConfig, estimate_projection, lambda_rule, solve_lasso
from .mode import BandwidthRule, bandwidth, kernel_mode

__all__ = [
    "EstimatorChoice",
    "EstimatorConfig",
    "choose_linear_branch",
    "estimate_linear_functional",
    "estimate_theta",
    "estimate_theta_two_groups",
]

BRANCHES = ("lasso-mean", "kernel-mode", "sample-mean", "raw-data")


@dataclass
class EstimatorChoice:
    """Dispatched branch plus a human-readable record of the comparison."""

    branch: str
    rationale_record: str


@dataclass
class EstimatorConfig:
    """Constants shared by the oracle pipeline."""

    regime_divisor: float = 784.0
    lasso: LassoConfig = field(default_factory=LassoConfig)
    bandwidth_rule: BandwidthRule = field(default_factory=BandwidthRule)

    def __post_init__(self):
        if self.regime_divisor < 1.0:
            raise ValueError("regime_divisor must be at least 1")


def choose_linear_branch(p, s, gamma, regime_divisor=784.0):
    """Pick the location-estimate branch for known (p, s, gamma).

    The sparse branch applies when s <= p / regime_divisor and its rate
    (1-gamma) s log(ep/s) does not exceed the sample-mean variance
    1 - gamma + gamma p; the mode branch when p / regime_divisor < s < p/2
    and (1-gamma) p max(1, log(ep/(p-2s)^2)) does not exceed it. Equality
    dispatches to the correlation-exploiting branch. Requires s < p/2.
    """
    if 2 * s >= p:
        raise ValueError("the location branch table requires s < p / 2")
    mean_var = 1.0 - gamma + gamma * p
    if s * regime_divisor <= p:
        rate = (1.0 - gamma) * s * math.log(math.e * p / s)
        if rate <= mean_var:
            return EstimatorChoice(
                "lasso-mean",
                "s=%d <= p/%g and (1-gamma) s log(ep/s)=%.6g <= 1-gamma+gamma p=%.6g"
                % (s, regime_divisor, rate, mean_var),
            )
        return EstimatorChoice(
            "sample-mean",
            "s=%d <= p/%g but (1-gamma) s log(ep/s)=%.6g > 1-gamma+gamma p=%.6g"
            % (s, regime_divisor, rate, mean_var),
        )
    d = p - 2 * s
    rate = (1.0 - gamma) * p * max(1.0, math.log(math.e * p / (d * d)))
    if rate <= mean_var:
        return EstimatorChoice(
            "kernel-mode",
            "p/%g < s=%d < p/2 and (1-gamma) p max(1, log(ep/(p-2s)^2))=%.6g <= "
            "1-gamma+gamma p=%.6g" % (regime_divisor, s, rate, mean_var),
        )
    return EstimatorChoice(
        "sample-mean",
        "p/%g < s=%d < p/2 but (1-gamma) p max(1, log(ep/(p-2s)^2))=%.6g > "
        "1-gamma+gamma p=%.6g" % (regime_divisor, s, rate, mean_var),
    )


def estimate_linear_functional(x, s, gamma, cfg=None, rng=None, views=None):
    """Estimate mean(theta) with known sparsity and correlation level.

    Parameters
    ----------
    x : array-like, shape (p,)
    s : int
        Sparsity bound, s < p/2.
    gamma : float in [0, 1]
    cfg : EstimatorConfig, optional
    rng : numpy.random.Generator, optional
        Used only to draw the decorrelation scalar when ``views`` is absent.
    views : DecorrelatedViews, optional
        Precomputed views of x, shared with the projection step.

    Returns
    -------
    (float, EstimatorChoice)
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if not 1 <= s:
        raise ValueError("s must be positive")
    choice = choose_linear_branch(p, s, gamma, cfg.regime_divisor)
    if views is None:
        views = decorrelate(x, gamma, rng if rng is not None else np.random.default_rng())

    if choice.branch == "lasso-mean":
        lam = lambda_rule(p, s, 1.0 - gamma)
        sol = solve_lasso(views.y_regression, lam, cfg.lasso)
        return sol.beta_mean, choice
    if choice.branch == "kernel-mode":
        h = bandwidth(p, s, 1.0 - gamma, cfg.bandwidth_rule)
        return kernel_mode(views.y_contamination, h).mu_hat, choice
    return views.x_bar, choice


def estimate_theta(x, s, gamma, cfg=None, rng=None):
    """Full signal estimate with known sparsity and correlation level.

    For s >= p/2 no estimator improves on the data itself and a copy of x
    is returned. Otherwise the centered and location parts are estimated
    from one shared set of decorrelated views and summed.
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if not 1 <= s <= p:
        raise ValueError("s must satisfy 1 <= s <= p")
    if 2 * s >= p:
        return x.copy()
    views = decorrelate(x, gamma, rng if rng is not None else np.random.default_rng())
    v_hat = estimate_projection(views, s, gamma, cfg.regime_divisor, cfg.lasso)
    t_hat, _ = estimate_linear_functional(x, s, gamma, cfg, views=views)
    return v_hat + t_hat


def estimate_theta_two_groups(x, s, sigma, rng=None, cfg=None):
    """Signal estimate in the two-groups model: x = theta + mu 1 + sigma z.

    Identical pipeline with noise variance sigma^2 throughout and no
    sample-mean branch: the location mu is not identified by the mean, so
    the sparse regime uses the penalized-regression mean and everything
    else the windowed mode. Requires s < p/2. The estimate depends on x
    only through x - mean(x) 1 and the decorrelation draw, so it is
    exactly invariant to shifting x by a multiple of the all-ones vector.
    """
    cfg = cfg if cfg is not None else EstimatorConfig()
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if sigma < 0.0 or not math.isfinite(sigma):
        raise ValueError("sigma must be a nonnegative real")
    if not 1 <= s:
        raise ValueError("s must be positive")
    if 2 * s >= p:
        raise ValueError("the two-groups model requires s < p / 2")

    xi = float((rng if rng is not None else np.random.default_rng()).standard_normal())
    views = _views(x, sigma * sigma, float("nan"), xi)

    if s * cfg.regime_divisor <= p:
        lam = lambda_rule(p, s, sigma * sigma)
        sol = solve_lasso(views.y_regression, lam, cfg.lasso)
        return sol.v_hat + sol.beta_mean
    h = bandwidth(p, s, sigma * sigma, cfg.bandwidth_rule)
    t_hat = kernel_mode(views.y_contamination, h).mu_hat
    return views.x_tilde + t_hat
