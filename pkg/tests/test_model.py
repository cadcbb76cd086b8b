import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from eqcorr.model import (
    Observation,
    ProblemInstance,
    RateQuery,
    SignalScheme,
    make_signal,
    minimax_rate_sq,
    perfect_corr_rate_sq,
    sample_observation,
    two_groups_rate_sq,
)

# frozen reference values, computed once by hand from the closed forms
RATE_TABLE = [
    (100, 60, 0.3, 100.0),
    (100, 50, 0.0, 100.0),
    (100, 10, 1.0, 0.0),
    (100, 10, 0.0, 33.025850929940454),
    (100, 10, 0.5, 16.512925464970227),
    (1000, 1, 0.0, 7.907755278982137),
    (100, 48, 0.0, 100.0),
    (100, 48, 0.9, 28.3258146374831),
]

TWO_GROUPS_TABLE = [
    (100, 50, 1.0, math.inf),
    (100, 60, 2.0, math.inf),
    (100, 10, 2.0, 132.10340371976181),
    (100, 10, 0.0, 0.0),
    (100, 49, 1.0, 421.8875824868201),
    (100, 48, 1.0, 283.25814637483103),
]


@pytest.mark.parametrize("p,s,gamma,expect", RATE_TABLE)
def test_minimax_rate_table(p, s, gamma, expect):
    assert minimax_rate_sq(p, s, gamma) == expect


@pytest.mark.parametrize("p,s,sigma,expect", TWO_GROUPS_TABLE)
def test_two_groups_rate_table(p, s, sigma, expect):
    assert two_groups_rate_sq(p, s, sigma) == expect


def test_perfect_corr_boundary():
    assert perfect_corr_rate_sq(10, 4) == 0.0
    assert perfect_corr_rate_sq(10, 5) == 10.0
    assert perfect_corr_rate_sq(1, 1) == 1.0


def test_middle_branch_is_capped_at_p():
    # p = 100, s = 48 puts (p - 2s)^2 = 16 below 4p = 400, and the
    # uncapped value at gamma = 0 is ~283, so the cap must bite.
    assert minimax_rate_sq(100, 48, 0.0) == 100.0
    assert two_groups_rate_sq(100, 48, 1.0) > 100.0


def test_middle_branch_log_clamped():
    # (p - 2s)^2 can exceed e*p inside the middle regime, which would make
    # the raw log negative; the clamp keeps the rate at exactly 0.
    p, s = 30, 10  # d^2 = 100 sits between e*p ~ 81.5 and 4p = 120
    assert minimax_rate_sq(p, s, 0.0) == 0.0
    assert two_groups_rate_sq(p, s, 1.0) == 0.0


@given(
    p=st.integers(min_value=1, max_value=4000),
    frac=st.floats(min_value=0.0, max_value=1.0),
    g1=st.floats(min_value=0.0, max_value=1.0),
    g2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_rate_monotone_in_gamma_and_bounded(p, frac, g1, g2):
    s = max(1, min(p, int(round(frac * p))))
    lo, hi = sorted((g1, g2))
    assert 0.0 <= minimax_rate_sq(p, s, hi) <= minimax_rate_sq(p, s, lo) <= p


@given(
    p=st.integers(min_value=2, max_value=4000),
    frac=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_gamma_one_matches_perfect_corr_curve(p, frac):
    s = max(1, min(p, int(round(frac * p))))
    assert minimax_rate_sq(p, s, 1.0) == perfect_corr_rate_sq(p, s)


@given(
    p=st.integers(min_value=2, max_value=4000),
    frac=st.floats(min_value=0.0, max_value=0.49),
    gamma=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_two_groups_dominates_known_location_rate(p, frac, gamma):
    # the two-groups curve with sigma^2 = 1 - gamma is never below the
    # benchmark curve when the signal is genuinely sparse
    s = max(1, int(frac * p))
    if 2 * s >= p:
        return
    tg = two_groups_rate_sq(p, s, math.sqrt(1.0 - gamma))
    assert tg >= minimax_rate_sq(p, s, gamma) - 1e-12


@pytest.mark.parametrize(
    "p,s",
    [(0, 1), (10, 0), (10, 11), (-3, 1)],
)
def test_dimension_validation(p, s):
    with pytest.raises(ValueError):
        minimax_rate_sq(p, s, 0.5)


@pytest.mark.parametrize("gamma", [-0.1, 1.1, math.nan, math.inf])
def test_gamma_validation(gamma):
    with pytest.raises(ValueError):
        minimax_rate_sq(10, 2, gamma)


def test_two_groups_sigma_validation():
    with pytest.raises(ValueError):
        two_groups_rate_sq(10, 2, -1.0)
    with pytest.raises(ValueError):
        two_groups_rate_sq(10, 2, math.nan)


def test_rate_query_delegates():
    q = RateQuery(p=100, s=10, gamma=0.5)
    assert q.rate_sq() == minimax_rate_sq(100, 10, 0.5)
    with pytest.raises(ValueError):
        RateQuery(p=100, s=200, gamma=0.5)


# ---------------------------------------------------------------------------
# signals
# ---------------------------------------------------------------------------

def test_constant_amplitude_prefix_support():
    scheme = SignalScheme(kind="constant-amplitude", amplitude=2.5, support_rule="prefix")
    theta = make_signal(8, 3, scheme, np.random.default_rng(0))
    assert_array_equal(theta, [2.5, 2.5, 2.5, 0, 0, 0, 0, 0])


def test_random_support_size_and_values():
    rng = np.random.default_rng(3)
    scheme = SignalScheme(kind="constant-amplitude", amplitude=1.5)
    theta = make_signal(50, 7, scheme, rng)
    assert theta.shape == (50,)
    assert np.count_nonzero(theta) == 7
    assert set(theta[theta != 0]) == {1.5}


def test_signed_constant_values():
    rng = np.random.default_rng(11)
    scheme = SignalScheme(kind="signed-constant", amplitude=3.0, support_rule="prefix")
    theta = make_signal(200, 100, scheme, rng)
    active = theta[:100]
    assert_array_equal(np.abs(active), 3.0)
    # both signs show up with 100 fair flips
    assert (active > 0).any() and (active < 0).any()
    assert_array_equal(theta[100:], 0.0)


def test_uniform_range_bounds():
    rng = np.random.default_rng(5)
    scheme = SignalScheme(kind="uniform-range", amplitude=0.7, support_rule="prefix")
    theta = make_signal(100, 40, scheme, rng)
    assert np.all(np.abs(theta) <= 0.7)
    assert np.count_nonzero(theta[40:]) == 0


def test_user_supplied_verbatim_and_budget():
    vals = np.zeros(6)
    vals[2] = 4.0
    scheme = SignalScheme(kind="user-supplied", values=vals)
    theta = make_signal(6, 1, scheme, np.random.default_rng(0))
    assert_array_equal(theta, vals)
    with pytest.raises(ValueError):
        make_signal(5, 1, scheme, np.random.default_rng(0))  # wrong length
    with pytest.raises(ValueError):
        make_signal(6, 0, SignalScheme(), np.random.default_rng(0))


def test_user_supplied_rejects_overfull_support():
    scheme = SignalScheme(kind="user-supplied", values=np.ones(6))
    with pytest.raises(ValueError):
        make_signal(6, 2, scheme, np.random.default_rng(0))


def test_scheme_validation():
    with pytest.raises(ValueError):
        SignalScheme(kind="bogus")
    with pytest.raises(ValueError):
        SignalScheme(support_rule="bogus")
    with pytest.raises(ValueError):
        SignalScheme(amplitude=math.inf)


def test_problem_instance_validation():
    theta = np.zeros(10)
    theta[:3] = 1.0
    ProblemInstance(p=10, s=3, gamma=0.5, theta=theta)
    with pytest.raises(ValueError):
        ProblemInstance(p=10, s=2, gamma=0.5, theta=theta)
    with pytest.raises(ValueError):
        ProblemInstance(p=9, s=3, gamma=0.5, theta=theta)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sampling_is_reproducible():
    theta = np.arange(20.0)
    a = sample_observation(theta, 0.4, np.random.default_rng(99))
    b = sample_observation(theta, 0.4, np.random.default_rng(99))
    assert_array_equal(a.x, b.x)
    assert a.w == b.w


def test_gamma_one_draws_are_exactly_common_shift():
    # on the zero coordinates of theta the draw is bit-for-bit equal to w,
    # which is what makes exact recovery possible at full correlation
    theta = np.zeros(12)
    theta[3] = 2.0
    obs = sample_observation(theta, 1.0, np.random.default_rng(1))
    off = obs.x[theta == 0.0]
    assert np.ptp(off) == 0.0
    assert off[0] == obs.w


def test_gamma_zero_has_no_shared_component():
    theta = np.zeros(4)
    rng = np.random.default_rng(2)
    obs = sample_observation(theta, 0.0, rng)
    # w is still drawn (stream layout is fixed) but does not enter x
    x2 = np.random.default_rng(2).standard_normal(5)[1:]
    assert_allclose(obs.x, x2)


def test_empirical_covariance_matches_model():
    gamma = 0.6
    n = 20000
    rng = np.random.default_rng(42)
    draws = np.empty((n, 3))
    for i in range(n):
        draws[i] = sample_observation(np.zeros(3), gamma, rng).x
    cov = np.cov(draws.T)
    assert_allclose(np.diag(cov), 1.0, atol=0.05)
    off = cov[~np.eye(3, dtype=bool)]
    assert_allclose(off, gamma, atol=0.05)


def test_observation_keeps_seed_record():
    obs = sample_observation(np.zeros(3), 0.5, np.random.default_rng(0), seed_record=("cell", 7))
    assert obs.seed_record == ("cell", 7)
    assert isinstance(obs, Observation)
