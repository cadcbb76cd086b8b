"""Sparse signal estimation under equicorrelated Gaussian noise.

The observation is x = theta + sqrt(gamma) W 1 + sqrt(1-gamma) Z with an
s-sparse theta, a scalar noise component W shared by every coordinate and
idiosyncratic noise Z. The package provides the decorrelation transform,
the penalized-regression and windowed-mode estimators, selectors that
adapt to unknown gamma and s, reference rate curves, a deterministic
Monte Carlo risk harness, and a command line frontend.
"""

from .adaptive import (
    CorrelationEstimate,
    LepskiConfig,
    LepskiTrace,
    adaptive_estimate,
    default_subset_params,
    estimate_correlation,
    lepski_linear,
    lepski_projection,
)
from .decorrelate import DecorrelatedViews, RegressionDesign, decorrelate, design_apply
from .harness import (
    CellSummary,
    ExperimentConfig,
    RiskReport,
    reproduce_figure,
    run_risk_experiment,
)
from .lasso import (
    LassoConfig,
    LassoDidNotConverge,
    LassoSolution,
    estimate_projection,
    lambda_rule,
    lasso_mean,
    solve_lasso,
)
from .mixture import (
    MixtureSpec,
    ModeSearchResult,
    delta_h,
    find_mode,
    mixture_f,
    population_G,
    population_J,
    verify_theorem_F1,
)
from .mode import (
    BandwidthRule,
    ModeEstimate,
    bandwidth,
    kernel_mode,
    kernel_mode_correlated,
    sample_median,
)
from .model import (
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
from .pipeline import (
    EstimatorChoice,
    EstimatorConfig,
    choose_linear_branch,
    estimate_linear_functional,
    estimate_theta,
    estimate_theta_two_groups,
)

__version__ = "0.1.0"
