"""Ground-truth model utilities.

Signal construction, sampling from the equicorrelated Gaussian observation
model, and the closed-form squared-error rate curves used as references by
the risk harness.

The observation model is

    X = theta + sqrt(gamma) * W * 1 + sqrt(1 - gamma) * Z,

with W a scalar standard normal shared by every coordinate and Z an
independent standard normal vector, so cov(X) = (1-gamma) I + gamma 11'.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SignalScheme",
    "ProblemInstance",
    "Observation",
    "RateQuery",
    "make_signal",
    "sample_observation",
    "minimax_rate_sq",
    "perfect_corr_rate_sq",
    "two_groups_rate_sq",
]

SIGNAL_KINDS = ("constant-amplitude", "signed-constant", "uniform-range", "user-supplied")
SUPPORT_RULES = ("random-uniform", "prefix")


# ---------------------------------------------------------------------------
# record types
# ---------------------------------------------------------------------------

@dataclass
class SignalScheme:
    """Recipe for building an s-sparse signal vector.

    Parameters
    ----------
    kind : str
        One of ``constant-amplitude`` (every active coordinate equals
        ``amplitude``), ``signed-constant`` (active coordinates are
        ``+-amplitude`` with independent signs), ``uniform-range`` (active
        coordinates drawn uniformly from ``[-amplitude, amplitude]``) or
        ``user-supplied`` (take ``values`` verbatim).
    amplitude : float
        Scale of the active coordinates. Ignored for ``user-supplied``.
    support_rule : str
        ``random-uniform`` picks the support uniformly at random without
        replacement; ``prefix`` uses the first s coordinates.
    values : array-like or None
        Full-length vector used by ``user-supplied``.
    """

    kind: str = "constant-amplitude"
    amplitude: float = 1.0
    support_rule: str = "random-uniform"
    values: object = None

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ValueError("unknown signal kind: %r" % (self.kind,))
        if self.support_rule not in SUPPORT_RULES:
            raise ValueError("unknown support rule: %r" % (self.support_rule,))
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")


@dataclass
class ProblemInstance:
    """A fully specified estimation problem: dimensions and the true signal."""

    p: int
    s: int
    gamma: float
    theta: np.ndarray

    def __post_init__(self):
        _check_dims(self.p, self.s)
        _check_gamma(self.gamma)
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.shape != (self.p,):
            raise ValueError("theta must have shape (p,)")
        if int(np.count_nonzero(self.theta)) > self.s:
            raise ValueError("theta has more than s nonzero coordinates")


@dataclass
class Observation:
    """One draw from the observation model.

    ``w`` is the realized shared noise component, kept for diagnostics;
    ``seed_record`` is an opaque reproducibility token supplied by the
    caller (the harness stores its substream key here).
    """

    x: np.ndarray
    w: float
    seed_record: object = None


@dataclass
class RateQuery:
    """Validated (p, s, gamma) triple for rate-table emission."""

    p: int
    s: int
    gamma: float

    def __post_init__(self):
        _check_dims(self.p, self.s)
        _check_gamma(self.gamma)

    def rate_sq(self):
        return minimax_rate_sq(self.p, self.s, self.gamma)


# ---------------------------------------------------------------------------
# signal construction and sampling
# ---------------------------------------------------------------------------

def _check_dims(p, s):
    if not (isinstance(p, (int, np.integer)) and p >= 1):
        raise ValueError("p must be a positive integer")
    if not (isinstance(s, (int, np.integer)) and 1 <= s <= p):
        raise ValueError("s must be an integer with 1 <= s <= p")


def _check_gamma(gamma):
    if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
        raise ValueError("gamma must lie in [0, 1]")


def make_signal(p, s, scheme, rng):
    """Build an s-sparse vector of length p following ``scheme``.

    Parameters
    ----------
    p, s : int
        Length and sparsity budget (at most s nonzero coordinates).
    scheme : SignalScheme
    rng : numpy.random.Generator

    Returns
    -------
    numpy.ndarray of shape (p,)
    """
    _check_dims(p, s)
    if scheme.kind == "user-supplied":
        theta = np.array(scheme.values, dtype=float)
        if theta.shape != (p,):
            raise ValueError("user-supplied values must have shape (p,)")
        if int(np.count_nonzero(theta)) > s:
            raise ValueError("user-supplied values exceed the sparsity budget")
        return theta

    if scheme.support_rule == "prefix":
        support = np.arange(s)
    else:
        support = rng.choice(p, size=s, replace=False)

    if scheme.kind == "constant-amplitude":
        vals = np.full(s, scheme.amplitude)
    elif scheme.kind == "signed-constant":
        vals = scheme.amplitude * (2.0 * rng.integers(0, 2, size=s) - 1.0)
    else:  # uniform-range
        vals = rng.uniform(-scheme.amplitude, scheme.amplitude, size=s)

    theta = np.zeros(p)
    theta[support] = vals
    return theta


def sample_observation(theta, gamma, rng, seed_record=None):
    """Draw X = theta + sqrt(gamma) W 1 + sqrt(1-gamma) Z.

    The shared scalar W is drawn first, then the idiosyncratic vector Z, so
    a given generator state always yields the same observation.

    Returns
    -------
    Observation
    """
    theta = np.asarray(theta, dtype=float)
    _check_gamma(gamma)
    w = float(rng.standard_normal())
    z = rng.standard_normal(theta.shape[0])
    x = theta + math.sqrt(gamma) * w + math.sqrt(1.0 - gamma) * z
    return Observation(x=x, w=w, seed_record=seed_record)


# ---------------------------------------------------------------------------
# reference rate curves
# ---------------------------------------------------------------------------

def minimax_rate_sq(p, s, gamma):
    """Benchmark squared-error rate for estimating theta under correlation gamma.

    Piecewise in the sparsity regime, with exact integer branch tests:

    * dense, 2s >= p: the rate is p for every gamma;
    * sparse, (p - 2s)^2 >= 4p: (1 - gamma) * s * log(e p / s);
    * in between: min((1 - gamma) * p * log(e p / (p - 2s)^2), p), with the
      logarithm clamped below at 0 so the value is nonnegative and
      nonincreasing in gamma throughout.

    Ties go to the sparse branch.
    """
    _check_dims(p, s)
    _check_gamma(gamma)
    if 2 * s >= p:
        return float(p)
    d = p - 2 * s
    if d * d >= 4 * p:
        return (1.0 - gamma) * s * math.log(math.e * p / s)
    body = max(math.log(math.e * p / (d * d)), 0.0)
    return min((1.0 - gamma) * p * body, float(p))


def perfect_corr_rate_sq(p, s):
    """Exact-recovery boundary at gamma = 1: zero below p/2, p at or above."""
    _check_dims(p, s)
    return float(p) if 2 * s >= p else 0.0


def two_groups_rate_sq(p, s, sigma):
    """Rate for the two-groups model with known noise level sigma.

    Infinite for 2s >= p (the location and the signal are not separable),
    sigma^2 * s * log(e p / s) in the sparse regime, and the clamped
    sigma^2 * p * log(e p / (p - 2s)^2) branch in between.
    """
    _check_dims(p, s)
    if not (math.isfinite(sigma) and sigma >= 0.0):
        raise ValueError("sigma must be a nonnegative real")
    if 2 * s >= p:
        return math.inf
    d = p - 2 * s
    if d * d >= 4 * p:
        return sigma * sigma * s * math.log(math.e * p / s)
    body = max(math.log(math.e * p / (d * d)), 0.0)
    return sigma * sigma * p * body
