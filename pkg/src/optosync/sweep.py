"""Parameter sweeps and bundled study presets.

A sweep runs one independent simulation per value of a single varying
parameter and aggregates the steady-window averages of every measure.
Points are independent, so they may run on a thread pool (the compiled
integration core releases the GIL); results are identical for any
worker count and ordered like the input values.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import simulate, stability_scan
from .errors import (
    DegeneratePhaseError,
    EmptyWindowError,
    NonFiniteError,
    NonPositiveDenominatorError,
    TooShortError,
    UnknownRecipeError,
)
from .measures import detect_steady_state, evaluate_measures
from .model import SystemParams, default_dt, default_params, modulation_period

TWO_PI = 2.0 * math.pi

#: external names of sweepable parameters mapped to dataclass fields
SWEEPABLE = {"lambda": "lam", "A_c": "A_c", "omega_c": "omega_c"}

#: minimum run length, in modulation periods, for trustworthy averages
MIN_PERIODS = 50.0

__all__ = [
    "SWEEPABLE",
    "SweepSpec",
    "SweepRow",
    "RunSummary",
    "run_point",
    "run_sweep",
    "Recipe",
    "RECIPE_NAMES",
    "figure_recipe",
]


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional scan of ``param_name`` over ``values``."""

    base: SystemParams
    param_name: str
    values: tuple
    t_end: float = 3000.0
    dt: float | None = None
    record_stride: int = 10
    transient_fraction: float = 0.6
    steady_tol: float = 1e-3

    def __post_init__(self):
        if self.param_name not in SWEEPABLE:
            raise ValueError(
                f"param_name must be one of {sorted(SWEEPABLE)}, got {self.param_name!r}")
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) == 0:
            raise ValueError("values must be non-empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("values must be finite")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")
        for v in values:
            params = self.params_for(v)
            if self.t_end < MIN_PERIODS * modulation_period(params):
                raise ValueError(
                    f"t_end = {self.t_end:g} covers fewer than {MIN_PERIODS:g} "
                    f"modulation periods at {self.param_name} = {v:g}")

    def params_for(self, value: float) -> SystemParams:
        return replace(self.base, **{SWEEPABLE[self.param_name]: float(value)})

    def resolved_dt(self, params: SystemParams) -> float:
        return self.dt if self.dt is not None else default_dt(params)


@dataclass(frozen=True)
class RunSummary:
    """Steady-window summary of a single run."""

    avg_s_q: float
    avg_s_phi: float
    avg_s_p: float
    avg_s_anti: float
    avg_s_c: float
    phi: float
    phi1: float
    phi2: float
    steady_reached: bool
    steady_onset: float
    steady_residual: float
    steady_period: float
    max_real_eig: float


@dataclass(frozen=True)
class SweepRow:
    """Result of one sweep point; ``status`` is "ok" or an error tag."""

    param_name: str
    param_value: float
    status: str = "ok"
    summary: RunSummary | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def summarize(traj, series, steady, stability) -> RunSummary:
    """Collapse the full outputs of one run to its steady-window numbers."""
    return RunSummary(
        avg_s_q=series.window_average("s_q"),
        avg_s_phi=series.window_average("s_phi"),
        avg_s_p=series.window_average("s_p"),
        avg_s_anti=series.window_average("s_anti"),
        avg_s_c=series.window_average("s_c"),
        phi=series.summary_phi,
        phi1=series.summary_phi1,
        phi2=series.summary_phi2,
        steady_reached=steady.reached,
        steady_onset=steady.onset_time,
        steady_residual=steady.residual,
        steady_period=steady.period_used,
        max_real_eig=float(stability.max_real_eig.max()),
    )


def run_point(params: SystemParams, *, t_end: float, dt: float,
              record_stride: int = 10, transient_fraction: float = 0.6,
              steady_tol: float = 1e-3, v0=None):
    """Simulate one parameter point and evaluate everything on it.

    Returns ``(trajectory, measure_series, steady_info, stability,
    summary)``; this single code path backs both the simulate command
    and every sweep point, so a one-value sweep reproduces the single
    run bit for bit.
    """
    traj = simulate(params, t_end=t_end, dt=dt, record_stride=record_stride, v0=v0)
    series = evaluate_measures(traj, transient_fraction=transient_fraction)
    steady = detect_steady_state(traj, params, steady_tol=steady_tol)
    stability = stability_scan(params, traj)
    return traj, series, steady, stability, summarize(traj, series, steady, stability)


_POINT_ERRORS = (
    NonFiniteError,
    TooShortError,
    DegeneratePhaseError,
    NonPositiveDenominatorError,
    EmptyWindowError,
)


def _sweep_one(spec: SweepSpec, value: float) -> SweepRow:
    params = spec.params_for(value)
    try:
        *_, summary = run_point(
            params,
            t_end=spec.t_end,
            dt=spec.resolved_dt(params),
            record_stride=spec.record_stride,
            transient_fraction=spec.transient_fraction,
            steady_tol=spec.steady_tol,
        )
    except _POINT_ERRORS as exc:
        # unstable or degenerate points are reported, never dropped
        return SweepRow(param_name=spec.param_name, param_value=value,
                        status=type(exc).__name__.removesuffix("Error").lower(),
                        message=str(exc))
    return SweepRow(param_name=spec.param_name, param_value=value, summary=summary)


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> list[SweepRow]:
    """Run every point of ``spec``, optionally on ``jobs`` worker threads.

    Rows come back in the order of ``spec.values`` regardless of the
    worker count; per-point failures appear as rows with a non-"ok"
    status instead of aborting the sweep.
    """
    if jobs is not None and jobs < 1:
        raise ValueError("jobs must be >= 1")
    if jobs == 1 or len(spec.values) == 1:
        return [_sweep_one(spec, v) for v in spec.values]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda v: _sweep_one(spec, v), spec.values))


# ---------------------------------------------------------------------------
# bundled presets

@dataclass(frozen=True)
class Recipe:
    """A named study preset: either a single run or a sweep."""

    name: str
    params: SystemParams | None = None
    sweep: SweepSpec | None = None

    @property
    def kind(self) -> str:
        return "single" if self.sweep is None else "sweep"


RECIPE_NAMES = ("fig2", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig6")


def figure_recipe(name: str, base: SystemParams | None = None,
                  t_end: float = 3000.0, dt: float | None = None,
                  record_stride: int = 10, transient_fraction: float = 0.6,
                  steady_tol: float = 1e-3) -> Recipe:
    """Named parameter regimes of the bundled synchronization study.

    Single-run presets fix (lambda, A_c, omega_c) on top of ``base``
    (default parameters unless given):

    * ``fig2``  (0.03, 2, 3), in-phase regime
    * ``fig3``  (0.14, 1, 2), locked with a finite phase advance
    * ``fig5a`` (0.3, 1.5, 2) and ``fig5b`` (0.2, 1, 2), anti-phase

    Sweep presets scan one parameter with the others fixed:

    * ``fig4a`` lambda over [0.005, 0.15], 30 points, at A_c=2, omega_c=3
    * ``fig4b`` A_c over [0, 3], 30 points, at lambda=0.03, omega_c=3
    * ``fig6``  omega_c over [1.5, 4], 25 points, at lambda=0.14, A_c=1
    """
    base = base if base is not None else default_params()
    controls = dict(t_end=t_end, dt=dt, record_stride=record_stride,
                    transient_fraction=transient_fraction, steady_tol=steady_tol)

    singles = {
        "fig2": dict(lam=0.03, A_c=2.0, omega_c=3.0),
        "fig3": dict(lam=0.14, A_c=1.0, omega_c=2.0),
        "fig5a": dict(lam=0.3, A_c=1.5, omega_c=2.0),
        "fig5b": dict(lam=0.2, A_c=1.0, omega_c=2.0),
    }
    if name in singles:
        return Recipe(name=name, params=replace(base, **singles[name]))
    if name == "fig4a":
        spec = SweepSpec(base=replace(base, A_c=2.0, omega_c=3.0),
                         param_name="lambda",
                         values=tuple(np.linspace(0.005, 0.15, 30)), **controls)
        return Recipe(name=name, sweep=spec)
    if name == "fig4b":
        spec = SweepSpec(base=replace(base, lam=0.03, omega_c=3.0),
                         param_name="A_c",
                         values=tuple(np.linspace(0.0, 3.0, 30)), **controls)
        return Recipe(name=name, sweep=spec)
    if name == "fig6":
        spec = SweepSpec(base=replace(base, lam=0.14, A_c=1.0),
                         param_name="omega_c",
                         values=tuple(np.linspace(1.5, 4.0, 25)), **controls)
        return Recipe(name=name, sweep=spec)
    raise UnknownRecipeError(
        f"unknown recipe {name!r}; expected one of {', '.join(RECIPE_NAMES)}")
