"""Decorrelation of equicorrelated observations.

Subtracting the sample mean removes the shared noise component but leaves
the idiosyncratic noise slightly rank-deficient; adding an independent
scalar draw along the all-ones direction restores a spherical covariance:

    x_tilde = x - mean(x) 1 + sqrt((1 - gamma) / p) xi 1
            ~ N(theta - mean(theta) 1, (1 - gamma) I).

Two derived views feed the downstream estimators: ``y_regression`` is
sqrt(p) x_tilde, a regression against the centering design, and
``y_contamination`` is -x_tilde, a location sample in which the at most s
signal coordinates act as outliers.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["DecorrelatedViews", "RegressionDesign", "decorrelate", "design_apply"]


@dataclass
class DecorrelatedViews:
    """Decorrelated observation and the derived regression/contamination views."""

    x_tilde: np.ndarray
    x_bar: float
    xi: float
    y_regression: np.ndarray
    y_contamination: np.ndarray
    gamma_used: float

    @property
    def p(self):
        return self.x_tilde.shape[0]


@dataclass
class RegressionDesign:
    """Implicit design matrix M = sqrt(p) (I - 11'/p) of the regression view.

    Stored by dimension only; ``apply`` evaluates M v without materializing
    the p x p matrix. Under the observation model the regression noise
    M-residual has variance (1 - gamma) p per coordinate.
    """

    p: int

    def apply(self, v):
        return design_apply(self.p, v)

    def noise_var(self, gamma):
        return (1.0 - gamma) * self.p


def design_apply(p, v):
    """Evaluate sqrt(p) (v - mean(v) 1) for a length-p vector v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (p,):
        raise ValueError("v must have shape (p,)")
    return math.sqrt(p) * (v - v.mean())


def _views(x, noise_var, gamma_used, xi):
    x = np.asarray(x, dtype=float)
    p = x.shape[0]
    if p < 1:
        raise ValueError("x must be nonempty")
    if noise_var < 0.0:
        raise ValueError("noise variance must be nonnegative")
    x_bar = float(x.mean())
    x_tilde = x - x_bar + math.sqrt(noise_var / p) * xi
    return DecorrelatedViews(
        x_tilde=x_tilde,
        x_bar=x_bar,
        xi=xi,
        y_regression=math.sqrt(p) * x_tilde,
        y_contamination=-x_tilde,
        gamma_used=float(gamma_used),
    )


def decorrelate(x, gamma, rng):
    """Build the decorrelated views of x at correlation level gamma.

    Parameters
    ----------
    x : array-like, shape (p,)
    gamma : float in [0, 1]
    rng : numpy.random.Generator
        Source of the single scalar xi used to re-inflate the all-ones
        direction. One standard normal is drawn even when gamma = 1 (its
        coefficient is then zero) so the draw count is level-independent.

    Returns
    -------
    DecorrelatedViews
    """
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise ValueError("gamma must lie in [0, 1]")
    xi = float(rng.standard_normal())
    return _views(x, 1.0 - gamma, gamma, xi)
