"""Command line interface.

Subcommands: ``rates`` (print or emit rate tables), ``estimate`` (estimate
a signal from a vector), ``simulate`` (run a risk experiment from a JSON
config), ``figures`` (reproduce the reference figures), ``mixture``
(evaluate or locate the mixture capture density) and ``verify`` (run the
built-in quick checks). Exit codes: 0 success, 1 usage error, 2 runtime
failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .adaptive import LepskiConfig, adaptive_estimate
from .harness import ExperimentConfig, reproduce_figure, run_risk_experiment
from .lasso import LassoConfig
from .mixture import MixtureSpec, find_mode, population_G
from .mode import BandwidthRule
from .model import SignalScheme, minimax_rate_sq, two_groups_rate_sq
from .pipeline import EstimatorConfig, estimate_theta, estimate_theta_two_groups
from .verify import run_all_checks

__all__ = ["main", "cli_main", "parse_experiment_config"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; route that through the
    # usage-error path instead
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--config", default=None)

    top = _Parser(prog="eqcorr", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p_rates = sub.add_parser("rates", parents=[common], help="print or emit rate tables")
    p_rates.add_argument("--p", type=int, required=True)
    p_rates.add_argument("--s", type=int, default=None)
    p_rates.add_argument("--gamma", type=float, default=None)
    p_rates.add_argument("--kappa", type=float, default=None)
    p_rates.add_argument("--two-groups", action="store_true")
    p_rates.add_argument("--sigma", type=float, default=1.0)
    p_rates.set_defaults(func=_cmd_rates)

    p_est = sub.add_parser("estimate", parents=[common], help="estimate a signal from a vector")
    p_est.add_argument("--input", default="-", help="CSV file of one value per line, or - for stdin")
    p_est.add_argument("--s", type=int, required=True)
    p_est.add_argument("--gamma", type=float, default=None)
    p_est.add_argument("--adaptive", action="store_true")
    p_est.add_argument("--two-groups", action="store_true")
    p_est.add_argument("--sigma", type=float, default=None)
    p_est.set_defaults(func=_cmd_estimate)

    p_sim = sub.add_parser("simulate", parents=[common], help="run a risk experiment from JSON config")
    p_sim.set_defaults(func=_cmd_simulate)

    p_fig = sub.add_parser("figures", parents=[common], help="reproduce reference figures")
    p_fig.add_argument("--id", required=True, choices=("fig1", "fig2", "fig3"))
    p_fig.set_defaults(func=_cmd_figures)

    p_mix = sub.add_parser("mixture", parents=[common], help="evaluate or locate the capture density")
    p_mix.add_argument("--mu", type=float, required=True)
    p_mix.add_argument("--eta", type=float, action="append", required=True)
    p_mix.add_argument("--h", type=float, required=True)
    p_mix.add_argument("--weight-mu", type=float, default=0.5)
    p_mix.add_argument("--kind", choices=("gaussian", "huber"), default="gaussian")
    p_mix.add_argument("--locate", action="store_true")
    p_mix.add_argument("--at", type=float, default=None)
    p_mix.set_defaults(func=_cmd_mixture)

    p_ver = sub.add_parser("verify", parents=[common], help="run the built-in quick checks")
    p_ver.set_defaults(func=_cmd_verify)

    return top


def _threads(args):
    if args.threads is not None:
        return args.threads
    return int(os.environ.get("EQCORR_THREADS", "1"))


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _take(cfg, key, types, default=None, required=False):
    if key not in cfg:
        if required:
            raise UsageError("config key %r is required" % key)
        return default
    val = cfg.pop(key)
    if types is bool:
        if not isinstance(val, bool):
            raise UsageError("config key %r must be a boolean" % key)
        return val
    if types is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise UsageError("config key %r must be an integer" % key)
        return val
    if types is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise UsageError("config key %r must be a number" % key)
        return float(val)
    if types is str:
        if not isinstance(val, str):
            raise UsageError("config key %r must be a string" % key)
        return val
    if types is list:
        if not isinstance(val, list) or not val:
            raise UsageError("config key %r must be a nonempty list" % key)
        return val
    raise AssertionError


def parse_experiment_config(raw, seed_override=None, threads=None, out_override=None):
    """Build an ExperimentConfig from a flat JSON object with dotted keys.

    Raises UsageError naming the offending key on any problem.
    """
    if not isinstance(raw, dict):
        raise UsageError("config root must be a JSON object")
    cfg = dict(raw)

    p = _take(cfg, "p", int, required=True)
    trials = _take(cfg, "trials", int, required=True)
    seed = _take(cfg, "seed", int, default=0)
    sparsity = _take(cfg, "sparsity", list, required=True)
    gammas = _take(cfg, "gamma", list)
    kappas = _take(cfg, "kappa", list)
    estimators = tuple(_take(cfg, "estimators", list, default=["oracle"]))
    out_dir = _take(cfg, "out", str)

    scheme = SignalScheme(
        kind=_take(cfg, "signal.kind", str, default="constant-amplitude"),
        amplitude=_take(cfg, "signal.amplitude", float, default=1.0),
        support_rule=_take(cfg, "signal.support_rule", str, default="random-uniform"),
    )
    lasso = LassoConfig(
        lam=_take(cfg, "lasso.lam", float, default=0.0),
        tol_kkt=_take(cfg, "lasso.tol_kkt", float, default=1e-8),
        max_iter=_take(cfg, "lasso.max_iter", int, default=200000),
    )
    rule = BandwidthRule(
        c1=_take(cfg, "bandwidth.c1", float, default=1.0),
        l_delta=_take(cfg, "bandwidth.l_delta", float, default=math.e),
        loglog_term=_take(cfg, "bandwidth.loglog_term", float, default=0.0),
    )
    est_cfg = EstimatorConfig(
        regime_divisor=_take(cfg, "pipeline.regime_divisor", float, default=784.0),
        lasso=lasso,
        bandwidth_rule=rule,
    )
    lep_cfg = LepskiConfig(
        eta=_take(cfg, "lepski.eta", float, default=0.05),
        l_eta=_take(cfg, "lepski.l_eta", float, default=2.0),
        k_const=_take(cfg, "lepski.k_const", float, default=4.0),
        r_const=_take(cfg, "lepski.r_const", float, default=8.0),
        c_eta=_take(cfg, "lepski.c_eta", float, default=16.0),
        c1=_take(cfg, "lepski.c1", float, default=1.0),
        regime_divisor=_take(cfg, "lepski.regime_divisor", float, default=784.0),
    )
    if cfg:
        raise UsageError("unknown config key %r" % sorted(cfg)[0])

    try:
        return ExperimentConfig(
            p=p,
            trials=trials,
            seed=seed if seed_override is None else seed_override,
            sparsity=[int(s) for s in sparsity],
            gammas=None if gammas is None else [float(g) for g in gammas],
            kappas=None if kappas is None else [float(k) for k in kappas],
            scheme=scheme,
            estimators=estimators,
            threads=threads or 1,
            out_dir=out_dir if out_override is None else out_override,
            estimator_cfg=est_cfg,
            lepski_cfg=lep_cfg,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_rates(args):
    if args.gamma is not None and args.kappa is not None:
        raise UsageError("give only one of --gamma and --kappa")
    gamma = args.gamma
    if args.kappa is not None:
        gamma = 1.0 - float(args.p) ** (-args.kappa)
    if gamma is None and not args.two_groups:
        raise UsageError("one of --gamma or --kappa is required")

    rate = lambda s: (
        two_groups_rate_sq(args.p, s, args.sigma)
        if args.two_groups
        else minimax_rate_sq(args.p, s, gamma)
    )
    if args.s is not None:
        print("%g" % rate(args.s))
        return 0
    lines = ["s,rate_sq"] + ["%d,%.17g" % (s, rate(s)) for s in range(1, args.p + 1)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _read_vector(source):
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    vals = [float(tok) for tok in text.replace(",", "\n").split()]
    if not vals:
        raise UsageError("input vector is empty")
    return np.asarray(vals)


def _cmd_estimate(args):
    x = _read_vector(args.input)
    rng = np.random.default_rng(0 if args.seed is None else args.seed)
    if args.two_groups:
        if args.sigma is None:
            raise UsageError("--two-groups requires --sigma")
        theta_hat = estimate_theta_two_groups(x, args.s, args.sigma, rng=rng)
    elif args.adaptive:
        theta_hat = adaptive_estimate(x, rng=rng)
    else:
        if args.gamma is None:
            raise UsageError("--gamma is required unless --adaptive or --two-groups is set")
        theta_hat = estimate_theta(x, args.s, args.gamma, rng=rng)
    text = "\n".join("%.17g" % v for v in theta_hat) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_simulate(args):
    if not args.config:
        raise UsageError("simulate requires --config")
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read config: %s" % exc)
    except json.JSONDecodeError as exc:
        raise UsageError("config is not valid JSON: %s" % exc)
    cfg = parse_experiment_config(
        raw, seed_override=args.seed, threads=_threads(args), out_override=args.out
    )
    report = run_risk_experiment(cfg)
    out_dir = cfg.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "risk.csv")
    report.to_csv(path)
    print(path)
    return 0


def _cmd_figures(args):
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    paths = reproduce_figure(args.id, out_dir)
    for key in sorted(paths):
        print("%s: %s" % (key, paths[key]))
    return 0


def _cmd_mixture(args):
    spec = MixtureSpec(
        mu=args.mu, etas=args.eta, weight_mu=args.weight_mu, h=args.h, kind=args.kind
    )
    if args.at is not None:
        print("%.17g" % population_G(args.at, spec))
        return 0
    res = find_mode(spec)
    if args.locate:
        print("%.17g" % res.location)
    else:
        print("location %.6f value %.6f radius %.2e" % (res.location, res.value, res.certified_radius))
    return 0


def _cmd_verify(args):
    results = run_all_checks()
    ok = True
    for name, passed, detail in results:
        print("%-30s %s  (%s)" % (name, "PASS" if passed else "FAIL", detail))
        ok = ok and passed
    return 0 if ok else 2


def cli_main(argv=None):
    """Entry point returning an exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 1
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 1
    except Exception as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main(argv=None):
    code = cli_main(argv)
    if code:
        raise SystemExit(code)
    return 0


if __name__ == "__main__":
    main()
