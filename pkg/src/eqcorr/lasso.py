"""L1-penalized regression against the centering design.

Solves

    min_beta (1/p) ||y - M beta||^2 + 2 lambda ||beta||_1,
    M = sqrt(p) (I - 11'/p),

by accelerated proximal gradient with fixed step 1/2 (the smooth part has
Lipschitz constant 2) and a monotone restart rule. Because M annihilates
the all-ones direction the objective is flat along it up to the penalty;
after convergence the iterate is shifted along 1 to the representative
with minimal L1 norm, which splits cleanly into a centered part ``v_hat``
and a scalar location part ``beta_mean``.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LassoConfig",
    "LassoSolution",
    "LassoDidNotConverge",
    "solve_lasso",
    "lambda_rule",
    "lasso_mean",
    "estimate_projection",
]


@dataclass
class LassoConfig:
    """Solver settings. ``lam`` is used when no penalty is passed per call."""

    lam: float = 0.0
    tol_kkt: float = 1e-8
    max_iter: int = 200000
    step: float = 0.5

    def __post_init__(self):
        if self.lam < 0.0 or not math.isfinite(self.lam):
            raise ValueError("lam must be a nonnegative real")
        if self.tol_kkt <= 0.0:
            raise ValueError("tol_kkt must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class LassoSolution:
    """Converged estimate with its optimality certificate.

    ``beta_hat`` is the minimal-L1 representative along the all-ones
    direction, ``v_hat`` its centered part, ``beta_mean`` its mean. The
    KKT residual is evaluated at ``beta_hat``: active coordinates must
    satisfy |g_j + 2 lam sign(beta_j)| <= tol and zero coordinates
    |g_j| <= 2 lam + tol, where g is the smooth-part gradient.
    """

    beta_hat: np.ndarray
    v_hat: np.ndarray
    beta_mean: float
    objective: float
    kkt_residual: float
    iterations: int
    lam: float


class LassoDidNotConverge(RuntimeError):
    """Raised when the iteration budget is exhausted; carries the best iterate."""

    def __init__(self, solution):
        super().__init__(
            "no KKT certificate after %d iterations (residual %.3e, tol target "
            "exceeded)" % (solution.iterations, solution.kkt_residual)
        )
        self.solution = solution


def _soft(u, t):
    return np.sign(u) * np.maximum(np.abs(u) - t, 0.0)


def _objective(beta, z, y_mean_sq, lam):
    c = beta - beta.mean()
    r = z - c
    return float(r @ r) + y_mean_sq + 2.0 * lam * float(np.abs(beta).sum())


def _kkt_residual(beta, z, lam):
    g = 2.0 * (beta - beta.mean() - z)
    active = beta != 0.0
    r_active = np.abs(g[active] + 2.0 * lam * np.sign(beta[active]))
    r_zero = np.abs(g[~active]) - 2.0 * lam
    worst = 0.0
    if r_active.size:
        worst = float(r_active.max())
    if r_zero.size:
        worst = max(worst, float(r_zero.max()))
    return max(worst, 0.0)


def _canonicalize(beta):
    # the L1 norm of beta + c 1 is minimized over c at c = -median(beta);
    # for even length the optimal set is an interval and its midpoint is used
    return beta - np.median(beta)


def solve_lasso(y, lam=None, cfg=None, beta0=None):
    """Minimize (1/p)||y - M beta||^2 + 2 lam ||beta||_1.

    Parameters
    ----------
    y : array-like, shape (p,)
        Regression view of the observation.
    lam : float, optional
        Penalty level; falls back to ``cfg.lam``.
    cfg : LassoConfig, optional
    beta0 : array-like, optional
        Warm start. Defaults to zero.

    Returns
    -------
    LassoSolution

    Raises
    ------
    LassoDidNotConverge
        If no iterate certifies within ``cfg.max_iter`` steps. The best
        iterate found is attached to the exception.
    """
    cfg = cfg if cfg is not None else LassoConfig()
    lam = float(cfg.lam if lam is None else lam)
    if lam < 0.0 or not math.isfinite(lam):
        raise ValueError("lam must be a nonnegative real")

    y = np.asarray(y, dtype=float)
    p = y.shape[0]
    if p < 1:
        raise ValueError("y must be nonempty")
    y_mean = float(y.mean())
    y_mean_sq = y_mean * y_mean
    z = (y - y_mean) / math.sqrt(p)

    beta = np.zeros(p) if beta0 is None else np.array(beta0, dtype=float)
    if beta.shape != (p,):
        raise ValueError("beta0 must have shape (p,)")
    obj = _objective(beta, z, y_mean_sq, lam)

    # FISTA on the extrapolated point v; a gradient step with step 1/2 maps
    # any point to mean(v) 1 + z, so each iterate is soft(mean(v) + z, lam)
    v = beta.copy()
    t = 1.0
    best = (math.inf, beta, obj)

    for it in range(1, cfg.max_iter + 1):
        cand = _soft(v.mean() + z, lam)
        cand_obj = _objective(cand, z, y_mean_sq, lam)
        if cand_obj > obj:
            # momentum overshoot: restart from the last accepted iterate;
            # the plain proximal step from beta never increases the objective
            t = 1.0
            cand = _soft(beta.mean() + z, lam)
            cand_obj = _objective(cand, z, y_mean_sq, lam)
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        v = cand + ((t - 1.0) / t_next) * (cand - beta)
        t = t_next
        beta, obj = cand, cand_obj

        res = _kkt_residual(beta, z, lam)
        if res < best[0]:
            best = (res, beta, obj)
        if res <= cfg.tol_kkt:
            final = _canonicalize(beta)
            final_res = _kkt_residual(final, z, lam)
            if final_res <= cfg.tol_kkt:
                return LassoSolution(
                    beta_hat=final,
                    v_hat=final - final.mean(),
                    beta_mean=float(final.mean()),
                    objective=_objective(final, z, y_mean_sq, lam),
                    kkt_residual=final_res,
                    iterations=it,
                    lam=lam,
                )

    final = _canonicalize(best[1])
    raise LassoDidNotConverge(
        LassoSolution(
            beta_hat=final,
            v_hat=final - final.mean(),
            beta_mean=float(final.mean()),
            objective=_objective(final, z, y_mean_sq, lam),
            kkt_residual=_kkt_residual(final, z, lam),
            iterations=cfg.max_iter,
            lam=lam,
        )
    )


def lambda_rule(p, s, noise_var):
    """Penalty level 2 (4 + sqrt(2)) sqrt(noise_var * log(2 e p / s)).

    ``noise_var`` is the per-coordinate variance of the decorrelated
    observation, (1 - gamma) in the correlated model. No upper bound on s
    is enforced; callers may evaluate the rule outside 1 <= s <= p.
    """
    if p < 1 or s < 1:
        raise ValueError("p and s must be positive")
    if noise_var < 0.0:
        raise ValueError("noise_var must be nonnegative")
    return 2.0 * (4.0 + math.sqrt(2.0)) * math.sqrt(noise_var * math.log(2.0 * math.e * p / s))


def lasso_mean(solution):
    """Location estimate read off a converged solution."""
    return solution.beta_mean


def estimate_projection(views, s, gamma, regime_divisor=784.0, cfg=None):
    """Estimate the centered signal theta - mean(theta) 1 from decorrelated views.

    For s <= p / regime_divisor runs the penalized regression at the
    rule-based penalty and returns its centered part; otherwise returns the
    decorrelated observation itself, which is rate-optimal in the dense
    regime.
    """
    p = views.p
    if not 1 <= s <= p:
        raise ValueError("s must satisfy 1 <= s <= p")
    if regime_divisor <= 0.0:
        raise ValueError("regime_divisor must be positive")
    if s * regime_divisor <= p:
        lam = lambda_rule(p, s, 1.0 - gamma)
        sol = solve_lasso(views.y_regression, lam, cfg)
        return sol.v_hat
    return views.x_tilde.copy()
