"""Deterministic simulator for two coupled, periodically modulated
optomechanical cavities, with quantum synchronization measures.

The classical cavity and oscillator means follow their nonlinear
equations of motion while the Gaussian quantum fluctuations around them
follow the linear covariance equation; synchronization of the pair is
quantified by inverse error variances of difference quadratures, with
and without per-oscillator phase rotations.
"""

from .config import ConfigError, RunConfig, default_config, load_config
from .dynamics import (
    StabilityReport,
    Trajectory,
    cov_rhs,
    max_real_eigenvalue,
    mean_rhs,
    simulate,
    stability_scan,
)
from .errors import (
    DegeneratePhaseError,
    EmptyWindowError,
    NonFiniteError,
    NonPositiveDenominatorError,
    OptosyncError,
    TooShortError,
    UnknownRecipeError,
)
from .measures import (
    MeasureSeries,
    PhaseSeries,
    SteadyStateInfo,
    circular_mean,
    cumulative_average,
    detect_steady_state,
    evaluate_measures,
    phase_of,
    phase_series,
    s_anti,
    s_c,
    s_p,
    s_phi,
    s_phi_complete,
    s_q,
    steady_window,
    time_average,
)
from .model import (
    MeanState,
    SystemParams,
    default_dt,
    default_params,
    drift_matrix,
    modulation_period,
    noise_matrix,
    vacuum_covariance,
)
from .sweep import (
    Recipe,
    RunSummary,
    SweepRow,
    SweepSpec,
    figure_recipe,
    run_point,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegeneratePhaseError",
    "EmptyWindowError",
    "MeanState",
    "MeasureSeries",
    "NonFiniteError",
    "NonPositiveDenominatorError",
    "OptosyncError",
    "PhaseSeries",
    "Recipe",
    "RunConfig",
    "RunSummary",
    "StabilityReport",
    "SteadyStateInfo",
    "SweepRow",
    "SweepSpec",
    "TooShortError",
    "Trajectory",
    "UnknownRecipeError",
    "circular_mean",
    "cov_rhs",
    "cumulative_average",
    "default_config",
    "default_dt",
    "default_params",
    "detect_steady_state",
    "drift_matrix",
    "evaluate_measures",
    "figure_recipe",
    "load_config",
    "max_real_eigenvalue",
    "mean_rhs",
    "modulation_period",
    "noise_matrix",
    "phase_of",
    "phase_series",
    "run_point",
    "run_sweep",
    "s_anti",
    "s_c",
    "s_p",
    "s_phi",
    "s_phi_complete",
    "s_q",
    "simulate",
    "stability_scan",
    "steady_window",
    "time_average",
    "vacuum_covariance",
    "__version__",
]
