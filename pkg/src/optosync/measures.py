"""Synchronization measures evaluated on simulated trajectories.

All quadratic measures are inverse error variances built from the 8x8
fluctuation covariance:

* ``s_q``     complete synchronization, from the plain difference
  quadratures; bounded by 1.
* ``s_phi``   phase-shifted synchronization, the same construction after
  rotating each subsystem by its own oscillation phase so only the
  residual shift ``phi`` enters; bounded by 1 and identical to ``s_q``
  at ``phi = 0``.
* ``s_p``     phase synchronization, the inverse variance of the rotated
  momentum error alone; may exceed 1 when that quadrature is squeezed.
* ``s_anti``  anti-synchronization, ``s_phi`` at ``phi = pi`` (error
  operators become sums instead of differences).
* ``s_c``     complete synchronization including the classical mean
  error, never larger than ``s_q``.

Phase conventions
-----------------
Single-oscillator phases are quadrant-correct two-argument arctangents,
``phi_j = atan2(<p_j>, <q_j>)`` in [0, 2pi).  The mean-field flow
``dq/dt = omega p``, ``dp/dt ~ -omega q`` sweeps this angle clockwise
(it decreases in time), so the oscillator that runs ahead in time has
the smaller angle.  The reported phase difference is therefore the
advance of subsystem 2 over subsystem 1,

    ``phi = (phi_1 - phi_2) mod 2pi``,

which is positive when subsystem 2 leads, and is the shift at which the
rotated error operators of ``s_phi`` line up.  ``s_phi`` uses a single
constant ``phi`` per run (the circular mean over the steady window),
while ``s_p`` rotates by the instantaneous per-sample phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePhaseError,
    EmptyWindowError,
    NonPositiveDenominatorError,
    TooShortError,
)
from .model import SystemParams, modulation_period

TWO_PI = 2.0 * math.pi

#: below this magnitude on both quadratures the phase is undefined
PHASE_TOL = 1e-12

#: measure denominators at or below this are treated as unphysical
DENOM_TOL = 1e-15

__all__ = [
    "PhaseSeries",
    "SteadyStateInfo",
    "MeasureSeries",
    "phase_of",
    "circular_mean",
    "phase_series",
    "s_q",
    "s_phi",
    "s_p",
    "s_anti",
    "s_c",
    "s_phi_complete",
    "time_average",
    "cumulative_average",
    "steady_window",
    "detect_steady_state",
    "evaluate_measures",
]


# ---------------------------------------------------------------------------
# phases

def _wrap(angles):
    """Map angles into [0, 2pi); the rounded-up endpoint folds to 0."""
    wrapped = np.mod(angles, TWO_PI)
    return np.where(wrapped == TWO_PI, 0.0, wrapped)


def phase_of(q: float, p: float) -> float:
    """Oscillation phase atan2(p, q) mapped into [0, 2pi).

    Raises
    ------
    DegeneratePhaseError
        If both |q| and |p| are below 1e-12, where no direction exists.
    """
    if abs(q) < PHASE_TOL and abs(p) < PHASE_TOL:
        raise DegeneratePhaseError()
    return float(_wrap(math.atan2(p, q)))


def circular_mean(angles) -> float:
    """Direction of the resultant of unit phasors, in [0, 2pi).

    Invariant under shifting any sample by a multiple of 2pi.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.size == 0:
        raise EmptyWindowError("circular mean of an empty set")
    z = np.exp(1j * angles).mean()
    return float(_wrap(np.angle(z)))


@dataclass
class PhaseSeries:
    """Per-sample phases plus their circular means over the selection."""

    times: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    phi: np.ndarray
    summary_phi: float
    summary_phi1: float
    summary_phi2: float


def _raw_phases(means):
    """atan2 phases of both subsystems plus a degenerate-sample mask."""
    means = np.asarray(means, dtype=float)
    q1, p1 = means[..., 0], means[..., 1]
    q2, p2 = means[..., 4], means[..., 5]
    phi1 = _wrap(np.arctan2(p1, q1))
    phi2 = _wrap(np.arctan2(p2, q2))
    degenerate = ((np.abs(q1) < PHASE_TOL) & (np.abs(p1) < PHASE_TOL)) | \
                 ((np.abs(q2) < PHASE_TOL) & (np.abs(p2) < PHASE_TOL))
    return phi1, phi2, degenerate


def _window_mask(times, window):
    if window is None:
        return np.ones(len(times), dtype=bool)
    lo, hi = window
    eps = 1e-9 * max(1.0, abs(hi))
    mask = (times >= lo - eps) & (times <= hi + eps)
    return mask


def phase_series(traj, window=None) -> PhaseSeries:
    """Phases of every sample of ``traj`` within ``window``.

    ``window`` is an inclusive ``(lo, hi)`` time range, default the whole
    trajectory.  Every selected sample must have a well-defined phase in
    both subsystems, otherwise :class:`DegeneratePhaseError` is raised
    with the first offending sample time.
    """
    mask = _window_mask(traj.times, window)
    if not mask.any():
        raise EmptyWindowError("phase window selects no samples")
    times = traj.times[mask]
    phi1, phi2, degenerate = _raw_phases(traj.means[mask])
    if degenerate.any():
        raise DegeneratePhaseError(time=times[np.argmax(degenerate)])
    phi = _wrap(phi1 - phi2)
    return PhaseSeries(
        times=times, phi1=phi1, phi2=phi2, phi=phi,
        summary_phi=circular_mean(phi),
        summary_phi1=circular_mean(phi1),
        summary_phi2=circular_mean(phi2),
    )


# ---------------------------------------------------------------------------
# covariance measures

def _cov_entries(covs):
    v = np.asarray(covs, dtype=float)
    if v.shape[-2:] != (8, 8):
        raise ValueError(f"covariance must be ...x8x8, got shape {v.shape}")
    return v


def _invert(denominator):
    denominator = np.asarray(denominator)
    if np.any(denominator <= DENOM_TOL):
        bad = float(np.min(denominator))
        raise NonPositiveDenominatorError(
            f"measure denominator {bad:g} is not positive; covariance is unphysical")
    result = 1.0 / denominator
    return float(result) if result.ndim == 0 else result


def _sq_denominator(covs):
    v = _cov_entries(covs)
    return 0.5 * (v[..., 0, 0] + v[..., 1, 1] + v[..., 4, 4] + v[..., 5, 5]
                  - v[..., 0, 4] - v[..., 4, 0] - v[..., 5, 1] - v[..., 1, 5])


def _sphi_denominator(covs, phi):
    v = _cov_entries(covs)
    sin_phi = np.sin(phi)
    cos_phi = np.cos(phi)
    return 0.5 * (v[..., 0, 0] + v[..., 1, 1] + v[..., 4, 4] + v[..., 5, 5]
                  + 2.0 * v[..., 1, 4] * sin_phi - 2.0 * v[..., 0, 5] * sin_phi
                  - 2.0 * v[..., 1, 5] * cos_phi - 2.0 * v[..., 0, 4] * cos_phi)


def _sp_denominator(covs, phi1, phi2):
    v = _cov_entries(covs)
    s1, c1 = np.sin(phi1), np.cos(phi1)
    s2, c2 = np.sin(phi2), np.cos(phi2)
    return (v[..., 0, 0] * s1 * s1 + v[..., 1, 1] * c1 * c1
            + v[..., 4, 4] * s2 * s2 + v[..., 5, 5] * c2 * c2
            - 2.0 * v[..., 0, 1] * s1 * c1
            - 2.0 * v[..., 0, 4] * s1 * s2
            + 2.0 * v[..., 0, 5] * s1 * c2
            + 2.0 * v[..., 1, 4] * c1 * s2
            - 2.0 * v[..., 1, 5] * c1 * c2
            - 2.0 * v[..., 4, 5] * c2 * s2)


def s_q(covs):
    """Complete-synchronization measure; accepts one 8x8 or a stack."""
    return _invert(_sq_denominator(covs))


def s_phi(covs, phi):
    """Phase-shifted synchronization at relative shift ``phi``.

    Reduces exactly to :func:`s_q` at ``phi = 0``.
    """
    return _invert(_sphi_denominator(covs, phi))


def s_p(covs, phi1, phi2):
    """Phase-synchronization measure at oscillator phases (phi1, phi2).

    Inverse of twice the variance of the rotated momentum error; unlike
    the other measures it is not bounded by 1.
    """
    return _invert(_sp_denominator(covs, phi1, phi2))


def s_anti(covs):
    """Anti-synchronization measure, equal to ``s_phi(covs, pi)``."""
    return s_phi(covs, math.pi)


def s_c(means, covs):
    """Complete synchronization including the classical mean error.

    The squared mean differences enter the same denominator as the
    fluctuation variances, so ``s_c <= s_q`` pointwise.
    """
    means = np.asarray(means, dtype=float)
    dq = (means[..., 0] - means[..., 4]) / math.sqrt(2.0)
    dp = (means[..., 1] - means[..., 5]) / math.sqrt(2.0)
    return _invert(_sq_denominator(covs) + dq * dq + dp * dp)


def s_phi_complete(means, covs, phi1, phi2):
    """Phase-shifted synchronization including the rotated mean error.

    ``phi1``/``phi2`` are atan2-convention phases (scalars or per-sample
    arrays); each subsystem's means are rotated by its advancing phase
    (the negative of the atan2 angle) so the construction matches
    :func:`s_phi` evaluated at ``(phi1 - phi2) mod 2pi``.
    """
    means = np.asarray(means, dtype=float)
    q1, p1 = means[..., 0], means[..., 1]
    q2, p2 = means[..., 4], means[..., 5]
    c1, s1 = np.cos(phi1), np.sin(phi1)
    c2, s2 = np.cos(phi2), np.sin(phi2)
    q1r = q1 * c1 - p1 * s1
    p1r = p1 * c1 + q1 * s1
    q2r = q2 * c2 - p2 * s2
    p2r = p2 * c2 + q2 * s2
    mean_err = 0.5 * ((q1r - q2r) ** 2 + (p1r - p2r) ** 2)
    return _invert(_sphi_denominator(covs, _wrap(np.asarray(phi1) - phi2)) + mean_err)


# ---------------------------------------------------------------------------
# averaging

def time_average(times, values, window=None) -> float:
    """Trapezoidal time average of ``values`` over ``window``.

    ``window`` is an inclusive ``(lo, hi)`` range, default the full
    series.  Exact for a linear ramp, zero for a sinusoid averaged over
    an integer number of its periods.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = _window_mask(times, window)
    t = times[mask]
    y = values[mask]
    if len(t) < 2:
        raise EmptyWindowError("time average needs at least two samples")
    span = t[-1] - t[0]
    if span <= 0:
        raise EmptyWindowError("averaging window has zero length")
    return float(np.trapezoid(y, t) / span)


def cumulative_average(times, values) -> np.ndarray:
    """Running mean from the first sample, matching slow-settling curves.

    Element i is the trapezoidal average of ``values`` over
    ``[times[0], times[i]]``; the first element is ``values[0]``.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) == 0:
        raise EmptyWindowError("cumulative average of an empty series")
    out = np.empty_like(values)
    out[0] = values[0]
    if len(times) > 1:
        chunks = 0.5 * (values[1:] + values[:-1]) * np.diff(times)
        out[1:] = np.cumsum(chunks) / (times[1:] - times[0])
    return out


def steady_window(times, period: float, transient_fraction: float):
    """Late-time averaging window trimmed to whole modulation periods.

    Discards the first ``transient_fraction`` of the run, then anchors
    the window at the final sample and trims its length down to an
    integer number of ``period``.
    """
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        raise EmptyWindowError("trajectory has fewer than two samples")
    if not 0.0 <= transient_fraction < 1.0:
        raise ValueError("transient_fraction must be in [0, 1)")
    t_hi = float(times[-1])
    t_start = float(times[0]) + transient_fraction * (t_hi - float(times[0]))
    n_periods = int(math.floor((t_hi - t_start) / period))
    if n_periods < 1:
        raise EmptyWindowError(
            "steady window shorter than one modulation period; "
            "extend t_end or lower transient_fraction")
    return (t_hi - n_periods * period, t_hi)


# ---------------------------------------------------------------------------
# steady-state detection

@dataclass
class SteadyStateInfo:
    """Result of the periodic-orbit test on the mean trajectory."""

    reached: bool
    onset_time: float
    period_used: float
    residual: float
    period_multiple: int


def detect_steady_state(traj, params: SystemParams | None = None,
                        steady_tol: float = 1e-3,
                        max_period_multiple: int = 8) -> SteadyStateInfo:
    """Find when the mean trajectory settles onto a periodic orbit.

    The orbit of the driven system repeats after a small integer number
    m of modulation periods (the mechanics lock to omega_c / m), so
    samples one candidate period ``m * 2pi/omega_c`` apart are compared
    for m = 1..``max_period_multiple`` and the smallest m whose
    residual over the final two candidate periods stays below
    ``steady_tol`` is kept.  Residuals are L2 distances normalized by
    the largest mean-state norm of the run.

    ``onset_time`` is the first time from which the residual stays below
    tolerance for two consecutive candidate periods; if the orbit never
    settles, ``reached`` is False and ``onset_time`` is the end time.

    Raises
    ------
    TooShortError
        If the trajectory covers fewer than 10 modulation periods.
    """
    if params is None:
        params = traj.params
    period = modulation_period(params)
    times = traj.times
    span = times[-1] - times[0]
    if span < 10.0 * period:
        raise TooShortError(
            f"trajectory covers {span / period:.2f} modulation periods, need >= 10")

    h = traj.sample_spacing
    means = traj.means
    n = len(times)
    scale = float(np.linalg.norm(means, axis=1).max())
    if scale <= 0.0:
        scale = 1.0

    best = None
    chosen = None
    for m in range(1, max_period_multiple + 1):
        lag = int(round(m * period / h))
        if lag < 1 or 2 * lag >= n:
            continue
        dist = np.linalg.norm(means[lag:] - means[:-lag], axis=1) / scale
        final_mask = times[:n - lag] >= times[-1] - 2.0 * m * period - 1e-9
        if not final_mask.any():
            continue
        final_residual = float(dist[final_mask].max())
        if best is None or final_residual < best[1]:
            best = (m, final_residual, lag, dist)
        if final_residual < steady_tol:
            chosen = (m, final_residual, lag, dist)
            break
    if best is None:
        raise TooShortError("no candidate period fits inside the trajectory")
    m, final_residual, lag, dist = chosen if chosen is not None else best

    reached = final_residual < steady_tol
    onset_time = float(times[-1])
    if reached:
        below = dist < steady_tol
        for i in range(len(dist) - lag):
            if below[i:i + lag + 1].all():
                onset_time = float(times[i])
                break
    return SteadyStateInfo(reached=reached, onset_time=onset_time,
                           period_used=m * period, residual=final_residual,
                           period_multiple=m)


# ---------------------------------------------------------------------------
# full evaluation

@dataclass
class MeasureSeries:
    """All per-sample measures of one run plus their running averages.

    ``phi`` is the per-sample phase advance of subsystem 2 and
    ``summary_phi`` its circular mean over the steady ``window``; the
    ``s_phi`` series is evaluated at that constant summary value while
    ``s_p`` uses the instantaneous phases.  Running averages are
    cumulative means from t = 0.
    """

    times: np.ndarray
    s_q: np.ndarray
    s_phi: np.ndarray
    s_p: np.ndarray
    s_anti: np.ndarray
    s_c: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    phi: np.ndarray
    avg_s_q: np.ndarray
    avg_s_phi: np.ndarray
    avg_s_p: np.ndarray
    avg_s_anti: np.ndarray
    summary_phi: float
    summary_phi1: float
    summary_phi2: float
    window: tuple

    def window_average(self, name: str) -> float:
        """Steady-window time average of the series ``name``."""
        return time_average(self.times, getattr(self, name), self.window)


def _filled_phases(times, means, window_lo):
    """Per-sample phases with undefined early samples carried from the
    first defined one.

    The zero initial state has no phase; such samples are tolerated
    before the steady window starts (their phases are backfilled, and
    interior gaps carry the previous value) but raise inside it.
    """
    phi1, phi2, degenerate = _raw_phases(means)
    if degenerate.any():
        bad_inside = degenerate & (times >= window_lo - 1e-9)
        if bad_inside.any():
            raise DegeneratePhaseError(time=times[np.argmax(bad_inside)])
        valid = np.nonzero(~degenerate)[0]
        if len(valid) == 0:
            raise DegeneratePhaseError(time=times[0])
        idx = np.arange(len(times))
        prev = np.maximum.accumulate(np.where(degenerate, -1, idx))
        prev = np.where(prev < 0, valid[0], prev)
        phi1 = phi1[prev]
        phi2 = phi2[prev]
    return phi1, phi2


def evaluate_measures(traj, transient_fraction: float = 0.6) -> MeasureSeries:
    """Evaluate every synchronization measure along a trajectory.

    The steady window (see :func:`steady_window`) fixes the summary
    phases; all series cover the whole trajectory.
    """
    params = traj.params
    times = traj.times
    window = steady_window(times, modulation_period(params), transient_fraction)

    phi1, phi2 = _filled_phases(times, traj.means, window[0])
    phi = _wrap(phi1 - phi2)
    in_window = _window_mask(times, window)
    summary_phi = circular_mean(phi[in_window])
    summary_phi1 = circular_mean(phi1[in_window])
    summary_phi2 = circular_mean(phi2[in_window])

    sq = s_q(traj.covs)
    sphi = s_phi(traj.covs, summary_phi)
    sp = s_p(traj.covs, phi1, phi2)
    santi = s_anti(traj.covs)
    sc = s_c(traj.means, traj.covs)

    return MeasureSeries(
        times=times, s_q=sq, s_phi=sphi, s_p=sp, s_anti=santi, s_c=sc,
        phi1=phi1, phi2=phi2, phi=phi,
        avg_s_q=cumulative_average(times, sq),
        avg_s_phi=cumulative_average(times, sphi),
        avg_s_p=cumulative_average(times, sp),
        avg_s_anti=cumulative_average(times, santi),
        summary_phi=summary_phi,
        summary_phi1=summary_phi1,
        summary_phi2=summary_phi2,
        window=window,
    )
