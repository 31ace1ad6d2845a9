"""Outage probability of FD/HD NOMA UAV links over Rician shadowed fading.

Closed-form truncated-series evaluators for every (scheme, node) pair and
an independent Monte Carlo simulation oracle, plus a sweep CLI.
"""

from .channel import (
    ExponentialParams,
    RicianShadowedParams,
    TruncatedCdf,
    cdf_series_coeff,
    cdf_truncated,
    exponential_moment,
    rician_shadowed_moment,
    sample_exponential,
    sample_rician_shadowed,
)
from .montecarlo import McEstimate, McSettings, mc_outage, mc_threshold_equivalence_check
from .outage import (
    FadingSet,
    LinkBudget,
    Node,
    NodeGeometry,
    OutageResult,
    Scheme,
    SystemConfig,
    evaluate_outage,
    noma_effective_threshold,
    outage_fd_gs,
    outage_fd_uav,
    outage_hd_gs,
    outage_hd_uav,
    outage_oma_gs,
    outage_oma_uav,
    outage_series,
    rate_for,
    sinr_threshold,
)
from .scenario import (
    ConfigError,
    SweepSpec,
    SweepTable,
    emit_csv,
    emit_plot_data,
    load_config,
    run_sweep,
)
from .specfun import (
    Composition,
    SeriesConvergenceError,
    compositions,
    gauss_2f1,
    log_gamma,
    multinomial_coeff,
    pochhammer,
)

__version__ = "0.1.0"
