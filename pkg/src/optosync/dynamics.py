"""Time integration of the coupled mean-field and covariance dynamics.

The classical means obey a small nonlinear ODE system and the
fluctuation covariance obeys the linear matrix equation
``dV/dt = M(t) V + V M(t)^T + N`` driven by the drift matrix evaluated
along the concurrently advancing mean trajectory.  Both are stepped in
lockstep by classic fixed-step RK4 (the drift matrix is rebuilt from the
stage means at each stage time), which keeps the combined scheme fourth
order and makes runs exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NonFiniteError
from .model import (
    DIM,
    SystemParams,
    _state_vector,
    drift_matrix,
    modulation_period,
    noise_diagonal,
    vacuum_covariance,
)

__all__ = [
    "Trajectory",
    "StabilityReport",
    "mean_rhs",
    "cov_rhs",
    "simulate",
    "max_real_eigenvalue",
    "stability_scan",
]


@dataclass
class Trajectory:
    """Recorded samples of one simulation.

    ``means`` has shape (n, 8) in :data:`optosync.model.MEAN_ORDER` and
    ``covs`` has shape (n, 8, 8).  Samples are spaced by
    ``dt * record_stride`` and include t = 0 and the final step.
    """

    times: np.ndarray
    means: np.ndarray
    covs: np.ndarray
    params: SystemParams
    dt: float
    record_stride: int

    def __len__(self):
        return len(self.times)

    @property
    def sample_spacing(self) -> float:
        return self.dt * self.record_stride


@dataclass
class StabilityReport:
    """Largest real part of the drift-matrix spectrum at sampled times."""

    sample_times: np.ndarray
    max_real_eig: np.ndarray
    all_negative: bool


def mean_rhs(params: SystemParams, state, t: float) -> np.ndarray:
    """Time derivative of the mean-field state at time ``t``.

    ``state`` may be a :class:`~optosync.model.MeanState` or a length-8
    array; the derivative is returned as a length-8 array.
    """
    out = np.empty(DIM)
    _kernels.mean_rhs(out, params.as_array(), _state_vector(state), float(t))
    return out


def cov_rhs(m: np.ndarray, v: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Right-hand side M V + V M^T + N of the covariance equation."""
    m = np.asarray(m, dtype=float)
    v = np.asarray(v, dtype=float)
    return m @ v + v @ m.T + np.asarray(n, dtype=float)


def simulate(params: SystemParams, t_end: float, dt: float,
             record_stride: int = 1, v0: np.ndarray | None = None) -> Trajectory:
    """Integrate means and covariance from the zero state up to ``t_end``.

    Parameters
    ----------
    params : SystemParams
    t_end : float
        Requested end time; the actual end time is ``n_steps * dt`` with
        the step count rounded up so the final step lands on the
        recording grid.
    dt : float
        Fixed integration step.  Keeping at least a few hundred steps
        per period of the fastest frequency holds the RK4 error far
        below the measure tolerances.
    record_stride : int
        Keep one sample every this many steps.
    v0 : ndarray, optional
        Initial 8x8 covariance; defaults to the vacuum value I/2.

    Raises
    ------
    NonFiniteError
        If any state entry becomes NaN or infinite, with the time of
        first occurrence.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_end < dt:
        raise ValueError("t_end must be at least one step")
    record_stride = int(record_stride)
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    if v0 is None:
        v0 = vacuum_covariance()
    v0 = np.array(v0, dtype=float)
    if v0.shape != (DIM, DIM):
        raise ValueError(f"v0 must be {DIM}x{DIM}, got {v0.shape}")

    n_steps = int(round(t_end / dt))
    n_steps = max(n_steps, 1)
    # snap up so the final step is recorded and sampling stays uniform
    n_steps += (-n_steps) % record_stride

    times, means, covs, fail_step = _kernels.integrate(
        params.as_array(), v0, noise_diagonal(params), n_steps, dt, record_stride)
    if fail_step >= 0:
        raise NonFiniteError(fail_step * dt)
    return Trajectory(times=times, means=means, covs=covs, params=params,
                      dt=dt, record_stride=record_stride)


def max_real_eigenvalue(m: np.ndarray) -> float:
    """Largest real part of the eigenvalues of ``m``."""
    return float(np.linalg.eigvals(np.asarray(m, dtype=float)).real.max())


def stability_scan(params: SystemParams, traj: Trajectory,
                   n_samples: int = 16) -> StabilityReport:
    """Spectral stability diagnostic over the final modulation period.

    Evaluates the drift matrix at ``n_samples`` evenly spaced recorded
    times within the last modulation period of ``traj`` and reports the
    maximum real eigenvalue part at each.  All of them negative
    indicates the fluctuations relax onto a stable periodic regime.
    """
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    t_last = traj.times[-1]
    period = modulation_period(params)
    idx = np.nonzero(traj.times >= t_last - period - 1e-12)[0]
    if len(idx) == 0:
        idx = np.array([len(traj) - 1])
    take = np.unique(np.round(np.linspace(0, len(idx) - 1, n_samples)).astype(int))
    idx = idx[take]

    sample_times = traj.times[idx]
    max_real = np.array([
        max_real_eigenvalue(drift_matrix(params, traj.means[i], traj.times[i]))
        for i in idx
    ])
    return StabilityReport(sample_times=sample_times, max_real_eig=max_real,
                           all_negative=bool(np.all(max_real < 0.0)))
