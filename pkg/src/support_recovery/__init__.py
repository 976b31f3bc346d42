"""
Exact support recovery in high-dimensional signal-plus-noise models:
tail families, phase-transition boundaries, thresholding procedures,
dependent-noise generators, dependence diagnostics, and a reproducible
Monte Carlo harness.
"""

__version__ = "0.1.0"

from .boundaries import (
    SignalConfig,
    detection_boundary,
    heavier_than_agg_params,
    lighter_than_agg_params,
    non_udd_boundary,
    reparam,
    reparametrized_boundary,
    signal_magnitude,
    sparsity_count,
    strong_boundary,
    weak_boundary,
)
from .diagnostics import (
    StabilitySummary,
    UddProfile,
    correlated_subset_search,
    cp_sequence,
    gamma_packing,
    ramsey_clique_bound_holds,
    stability_ratio,
    udd_count,
    udd_profile,
)
from .experiments import (
    GridCell,
    GridResult,
    GridSpec,
    ParetoResult,
    ParetoSpec,
    bonferroni_alpha_schedule,
    family_from_spec,
    grid_spec_from_config,
    pareto_experiment,
    run_grid,
    run_trial,
    trial_stream,
)
from .noise import (
    AR1,
    FGN,
    BlockEquicorrelated,
    ExplicitCovariance,
    IID,
    NoiseModel,
    block_count,
    block_labels,
    fgn_autocovariance,
)
from .procedures import (
    Procedure,
    RecoveryMetrics,
    SupportEstimate,
    agnostic_threshold,
    apply,
    block_adapted_threshold,
    bonferroni_threshold,
    hochberg_select,
    holm_select,
    likelihood_top_s,
    metrics,
    oracle_top_s,
    sidak_threshold,
)
from .tails import (
    AggAsymptotic,
    Gaussian,
    GeneralizedGaussian,
    HeavierThanAgg,
    Laplace,
    LighterThanAgg,
    Pareto,
    TailFamily,
    asymptotic_quantile,
    lambert_w,
)
