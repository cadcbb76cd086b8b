import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from eqcorr.adaptive import (
    CorrelationEstimate,
    LepskiConfig,
    _linear_grid,
    _projection_grid,
    _select_witness,
    _sparse_grid,
    adaptive_estimate,
    default_subset_params,
    estimate_correlation,
    lepski_linear,
    lepski_projection,
)
from eqcorr.model import sample_observation


def sparse_instance(p, s, gamma, seed, amplitude=8.0):
    rng = np.random.default_rng(seed)
    theta = np.zeros(p)
    theta[rng.choice(p, size=s, replace=False)] = amplitude
    obs = sample_observation(theta, gamma, rng)
    return theta, obs.x, rng


# ---------------------------------------------------------------------------
# correlation level
# ---------------------------------------------------------------------------

def test_subset_defaults_frozen():
    assert default_subset_params(729) == (8, 328050)
    assert default_subset_params(8) == (6, 36450)
    assert default_subset_params(512) == (8, 328050)
    assert default_subset_params(4096) == (10, 10**6)
    assert default_subset_params(8192) == (11, 10**6)
    with pytest.raises(ValueError):
        default_subset_params(7)


def test_constant_input_gives_exact_zero():
    x = np.full(200, 3.7183)
    est = estimate_correlation(x, 2000, 6, np.random.default_rng(0))
    assert est.one_minus_gamma_hat == 0.0
    assert len(est.best_subset) == 6
    assert len(set(est.best_subset)) == 6
    assert 0 <= est.best_subset_seed < 2000


def test_full_correlation_with_sparse_signal_is_exact():
    # at gamma = 1 every off-support coordinate equals theta_i + w = w, so
    # any subset avoiding the support has sample variance exactly 0
    theta, x, _ = sparse_instance(200, 5, 1.0, seed=1)
    est = estimate_correlation(x, 2000, 6, np.random.default_rng(2))
    assert est.one_minus_gamma_hat == 0.0
    support = set(np.flatnonzero(theta).tolist())
    assert not (set(est.best_subset) & support)


def test_reported_variance_matches_winning_subset():
    rng = np.random.default_rng(3)
    x = rng.normal(size=100)
    est = estimate_correlation(x, 5000, 8, np.random.default_rng(4))
    recomputed = float(np.var(x[list(est.best_subset)], ddof=1))
    assert_allclose(est.one_minus_gamma_hat, recomputed, atol=1e-12)
    assert est.one_minus_gamma_hat >= 0.0


def test_exhaustive_subset_case():
    # with ell = p there is a single possible subset, so the minimum is
    # just the overall sample variance
    x = np.array([0.4, -1.0, 2.2, 0.0, 1.1, -0.7])
    est = estimate_correlation(x, 50, 6, np.random.default_rng(5))
    assert_allclose(est.one_minus_gamma_hat, np.var(x, ddof=1), atol=1e-12)


def test_scan_is_deterministic_for_a_seed():
    rng = np.random.default_rng(6)
    x = rng.normal(size=64)
    a = estimate_correlation(x, 300000, 6, np.random.default_rng(7))
    b = estimate_correlation(x, 300000, 6, np.random.default_rng(7))
    assert a.one_minus_gamma_hat == b.one_minus_gamma_hat
    assert a.best_subset == b.best_subset
    assert a.best_subset_seed == b.best_subset_seed


def test_scan_crosses_chunk_boundary():
    rng = np.random.default_rng(8)
    x = rng.normal(size=4)
    est = estimate_correlation(x, 262144 + 1000, 2, np.random.default_rng(9))
    assert len(set(est.best_subset)) == 2
    recomputed = float(np.var(x[list(est.best_subset)], ddof=1))
    assert_allclose(est.one_minus_gamma_hat, recomputed, atol=1e-12)


def test_correlation_validation():
    x = np.zeros(10)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        estimate_correlation(x, 10, 1, rng)
    with pytest.raises(ValueError):
        estimate_correlation(x, 10, 11, rng)
    with pytest.raises(ValueError):
        estimate_correlation(x, 0, 2, rng)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def test_grid_enumerations_frozen():
    assert _sparse_grid(8192, 784.0) == [1, 2, 4, 8]
    assert _projection_grid(8192, 784.0) == [1, 2, 4, 8, 8192]
    assert _projection_grid(512, 784.0) == [512]
    grid, k4 = _linear_grid(8192, 784.0)
    assert grid == [1, 2, 4, 8, 4032, 4064, 4080, 4095, 8192]
    assert k4 == 4
    grid, k4 = _linear_grid(1024, 784.0)
    assert grid == [1, 480, 496, 504, 511, 1024]
    assert k4 == 3
    grid, k4 = _linear_grid(16, 784.0)
    assert grid == [4, 6, 7, 16]
    assert k4 == 1


def test_witness_rule_contrast():
    grid = [1, 2, 4]
    est = [0.0, 0.1, 5.0]
    radii = [0.2, 0.5, 1.0]
    dist = lambda a, b: abs(a - b)
    # with the last ball in play nothing below s = 4 fits inside it
    i, checks = _select_witness(grid, est, radii, dist, include_last=True)
    assert grid[i] == 4
    # without it the smallest level already passes every remaining check
    i, checks = _select_witness(grid, est, radii, dist, include_last=False)
    assert grid[i] == 1
    assert [c["s"] for c in checks] == [1, 2]
    assert checks[1]["distance"] == pytest.approx(0.1)


def test_lepski_config_validation():
    with pytest.raises(ValueError):
        LepskiConfig(eta=0.0)
    with pytest.raises(ValueError):
        LepskiConfig(l_eta=0.5)
    with pytest.raises(ValueError):
        LepskiConfig(r_const=0.0)
    with pytest.raises(ValueError):
        LepskiConfig(regime_divisor=0.5)


# ---------------------------------------------------------------------------
# selectors
# ---------------------------------------------------------------------------

def test_projection_selector_exact_at_full_correlation():
    theta, x, _ = sparse_instance(1024, 4, 1.0, seed=10)
    v_hat, trace = lepski_projection(x, rng=np.random.default_rng(11))
    assert trace.kind == "projection"
    assert trace.grid == [1, 1024]
    assert trace.one_minus_gamma_hat == 0.0
    assert trace.selected_s == 1
    assert trace.branches[-1] == "dense-fallback"
    assert trace.radii[-1] == math.inf
    # the dense fallback never gates the witness
    assert all(c["s"] < 1024 for c in trace.checks)
    assert_allclose(v_hat, theta - theta.mean(), atol=1e-10)


def test_projection_witness_rule_holds_on_trace():
    theta, x, _ = sparse_instance(2048, 2, 0.9, seed=12)
    v_hat, trace = lepski_projection(x, rng=np.random.default_rng(13))
    i = trace.witness_index
    for j in range(len(trace.grid) - 1):  # sparse candidates only
        if trace.grid[j] < trace.grid[i]:
            continue
        d = float(np.linalg.norm(trace.estimates[i] - trace.estimates[j]))
        assert d <= trace.radii[j]
    assert_array_equal(v_hat, trace.estimates[i])


def test_linear_selector_branches_and_exactness():
    theta, x, _ = sparse_instance(1024, 4, 1.0, seed=14)
    t_hat, trace = lepski_linear(x, rng=np.random.default_rng(15))
    assert trace.kind == "linear"
    assert trace.grid == [1, 480, 496, 504, 511, 1024]
    assert trace.branches[0] == "lasso-mean"
    assert trace.branches[-1] == "sample-mean"
    assert set(trace.branches[1:-1]) == {"kernel-mode"}
    # estimated noise level is exactly 0, so the mode runs at h = 0 and
    # nails the alignment constant to rounding error
    assert trace.scales[1] == 0.0
    assert t_hat == pytest.approx(theta.mean(), abs=1e-10)


def test_linear_selector_mode_branch_gated_by_correlation():
    rng = np.random.default_rng(16)
    x = rng.normal(size=1024)
    corr = CorrelationEstimate(
        one_minus_gamma_hat=20.0, m=1, ell=2, best_subset=(0, 1), best_subset_seed=0
    )
    t_hat, trace = lepski_linear(x, corr=corr)
    # 20 * max(1, log(...)) exceeds the threshold on every near-dense rung
    assert set(trace.branches[1:-1]) == {"sample-mean"}
    assert all(r == 8.0 for r in trace.radii[1:-1])


def test_linear_selector_requires_16_coordinates():
    with pytest.raises(ValueError):
        lepski_linear(np.zeros(15), corr=CorrelationEstimate(1.0, 1, 2, (0, 1), 0))


def test_trace_json_forms():
    theta, x, _ = sparse_instance(1024, 4, 0.99, seed=17)
    rng = np.random.default_rng(18)
    _, tp = lepski_projection(x, rng=rng)
    _, tl = lepski_linear(x, rng=rng)
    dp = json.loads(tp.to_json())
    dl = json.loads(tl.to_json())
    assert dp["kind"] == "projection"
    assert "estimates" not in dp  # vectors are omitted from the JSON form
    assert dl["kind"] == "linear"
    assert len(dl["estimates"]) == len(dl["grid"])
    for d in (dp, dl):
        assert set(d) >= {"grid", "branches", "scales", "radii", "selected_s", "checks"}


# ---------------------------------------------------------------------------
# combined estimate
# ---------------------------------------------------------------------------

def test_adaptive_estimate_exact_at_full_correlation():
    theta, x, _ = sparse_instance(1024, 4, 1.0, seed=19)
    theta_hat = adaptive_estimate(x, rng=np.random.default_rng(20))
    err = theta_hat - theta
    assert float(err @ err) < 1e-16


def test_adaptive_estimate_deterministic_and_traced():
    theta, x, _ = sparse_instance(1024, 8, 0.9, seed=21)
    a = adaptive_estimate(x, rng=np.random.default_rng(22))
    b, (tp, tl) = adaptive_estimate(x, rng=np.random.default_rng(22), return_traces=True)
    assert_array_equal(a, b)
    assert tp.kind == "projection" and tl.kind == "linear"
    assert tp.one_minus_gamma_hat == tl.one_minus_gamma_hat
