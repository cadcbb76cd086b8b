"""Fast self-checks runnable from the command line.

A compressed version of the acceptance properties: mixture mode location,
root-finder residuals, exact recovery under perfect correlation, solver
certificates, raw-data risk calibration, and thread-count determinism.
Each check returns (name, passed, detail) and runs in seconds; the full
acceptance suite lives in the test tree.
"""

import filecmp
import math
import os
import tempfile

import numpy as np

from .harness import ExperimentConfig, run_risk_experiment
from .lasso import lambda_rule, solve_lasso
from .mixture import MixtureSpec, delta_h, find_mode, population_G, verify_theorem_F1
from .model import SignalScheme, make_signal, minimax_rate_sq, sample_observation
from .pipeline import estimate_theta

__all__ = ["run_all_checks"]


def _check_rates():
    ok = (
        minimax_rate_sq(100, 60, 0.3) == 100.0
        and minimax_rate_sq(100, 10, 1.0) == 0.0
        and abs(minimax_rate_sq(100, 10, 0.0) - 10.0 * math.log(10.0 * math.e)) < 1e-12
    )
    return "rate-table", ok, "three reference values"


def _check_modes():
    g = find_mode(MixtureSpec(mu=-2.0, etas=[2.0], weight_mu=0.6, h=0.25, kind="gaussian"))
    h = find_mode(MixtureSpec(mu=-2.0, etas=[2.0], weight_mu=0.6, h=0.25, kind="huber"))
    ok = (
        -2.01 <= g.location <= -1.99
        and 1.74 <= h.location <= 1.76
        and h.value > population_G(-2.0, MixtureSpec(-2.0, [2.0], 0.6, 0.25, "huber"))
    )
    return "mixture-modes", ok, "gaussian %.4f, huber %.4f" % (g.location, h.location)


def _check_delta():
    ok = True
    for hh in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        d = delta_h(hh)
        ok = ok and d >= hh and abs(d * math.tanh(d * hh) - hh) < 1e-12
    ok = ok and delta_h(10.0) / 10.0 <= 1.0 + 1e-6
    return "fixed-point-roots", ok, "six bandwidths"


def _check_theorem_f1():
    rng = np.random.default_rng(7)
    ok = True
    for _ in range(10):
        h = float(rng.uniform(0.5, 2.0))
        k = int(rng.integers(1, 6))
        etas = []
        t = 40.0 * h
        for _ in range(k):
            t += float(rng.uniform(31.0 * h, 60.0 * h))
            etas.append(t if rng.integers(0, 2) else -t)
        passed, _ = verify_theorem_F1(0.0, etas, h)
        ok = ok and passed
    return "mixture-peak-location", ok, "10 random mixtures"


def _check_perfect_corr():
    rng = np.random.default_rng(3)
    scheme = SignalScheme(kind="constant-amplitude", amplitude=5.0)
    ok = True
    for _ in range(10):
        theta = make_signal(1000, 400, scheme, rng)
        x = sample_observation(theta, 1.0, rng).x
        th = estimate_theta(x, 400, 1.0, rng=rng)
        ok = ok and float((th - theta) @ (th - theta)) < 1e-18
    return "perfect-correlation-recovery", ok, "10 trials at p=1000, s=400"


def _check_solver():
    rng = np.random.default_rng(11)
    ok = True
    for _ in range(20):
        p = 64
        s = int(rng.integers(1, 9))
        theta = np.zeros(p)
        theta[rng.choice(p, s, replace=False)] = rng.uniform(-50, 50, s)
        y = math.sqrt(p) * (theta - theta.mean()) + rng.standard_normal(p) * math.sqrt(p)
        sol = solve_lasso(y, lambda_rule(p, s, 1.0))
        ok = ok and sol.kkt_residual <= 1e-8
    return "solver-certificates", ok, "20 random instances at p=64"


def _check_raw_risk():
    cfg = ExperimentConfig(
        p=256, trials=400, seed=5, sparsity=[100], gammas=[0.5], estimators=("raw-data",)
    )
    rep = run_risk_experiment(cfg)
    mean = rep.cells[0].mse_mean
    ok = abs(mean - 256.0) < 0.10 * 256.0
    return "raw-data-risk", ok, "mean %.1f vs 256" % mean


def _check_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for threads in (1, 4):
            cfg = ExperimentConfig(
                p=64,
                trials=8,
                seed=9,
                sparsity=[4, 20],
                gammas=[0.0, 0.9],
                estimators=("oracle", "raw-data"),
                threads=threads,
            )
            path = os.path.join(tmp, "t%d.csv" % threads)
            run_risk_experiment(cfg).to_csv(path)
            paths.append(path)
        ok = filecmp.cmp(paths[0], paths[1], shallow=False)
    return "thread-determinism", ok, "1 vs 4 threads, byte compare"


def run_all_checks():
    """Run every quick check; returns a list of (name, passed, detail)."""
    checks = (
        _check_rates,
        _check_modes,
        _check_delta,
        _check_theorem_f1,
        _check_perfect_corr,
        _check_solver,
        _check_raw_risk,
        _check_determinism,
    )
    return [c() for c in checks]
