"""Physical model of two fiber-coupled, periodically modulated optomechanical cavities.

Each subsystem is a driven Fabry-Perot cavity whose field is coupled to a
mechanical oscillator by radiation pressure (strength ``g``); the two
cavities exchange photons at rate ``lam``.  The cavity detuning is
modulated in time as ``delta_j * (1 + A_c * cos(omega_c * t))``.  All
rates are expressed in units of the first cavity detuning, with
``hbar = k_B = 1``; under this convention each vacuum quadrature has
variance 1/2.

The fluctuation basis is ordered ``(dq1, dp1, dx1, dy1, dq2, dp2, dx2,
dy2)``, where ``dq, dp`` are the mechanical quadratures and ``dx, dy``
the optical ones.  Covariance matrices are plain 8x8 float arrays in
this basis with ``V[i, j] = <u_i u_j + u_j u_i> / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import _kernels

TWO_PI = 2.0 * math.pi

#: packed parameter vector order used by the compiled kernels
PARAM_ORDER = (
    "delta1", "delta2", "omega1", "omega2", "g", "gamma",
    "kappa", "E", "lam", "A_c", "omega_c", "n_bath",
)

#: column order of the mean-field state vector
MEAN_ORDER = ("q1", "p1", "re_a1", "im_a1", "q2", "p2", "re_a2", "im_a2")

DIM = _kernels.DIM


@dataclass(frozen=True)
class SystemParams:
    """All physical constants of the coupled system.

    Every field is dimensionless after normalizing rates by the first
    cavity detuning.  Instances are immutable and safe to share between
    threads.
    """

    delta1: float = 1.0
    delta2: float = 1.005
    omega1: float = 1.0
    omega2: float = 1.005
    g: float = 0.005
    gamma: float = 0.005
    kappa: float = 0.15
    E: float = 100.0
    lam: float = 0.03
    A_c: float = 2.0
    omega_c: float = 3.0
    n_bath: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"parameter {f.name} must be finite, got {value!r}")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ValueError("mechanical frequencies omega1, omega2 must be > 0")
        if self.omega_c <= 0:
            raise ValueError("modulation frequency omega_c must be > 0")
        if self.kappa < 0 or self.gamma < 0:
            raise ValueError("loss rates kappa, gamma must be >= 0")
        if self.n_bath < 0:
            raise ValueError("bath occupation n_bath must be >= 0")
        if self.A_c < 0:
            raise ValueError("modulation amplitude A_c must be >= 0")
        if self.E < 0:
            raise ValueError("drive amplitude E must be >= 0")

    def as_array(self) -> np.ndarray:
        """Pack the parameters in :data:`PARAM_ORDER` for the kernels."""
        return np.array([getattr(self, name) for name in PARAM_ORDER])


@dataclass(frozen=True)
class MeanState:
    """Classical mean values: mechanical quadratures and cavity amplitudes.

    ``re_a``/``im_a`` are the real and imaginary parts of the complex
    cavity amplitude of each subsystem.  The default is the all-zero
    state used as the initial condition of every simulation.
    """

    q1: float = 0.0
    p1: float = 0.0
    re_a1: float = 0.0
    im_a1: float = 0.0
    q2: float = 0.0
    p2: float = 0.0
    re_a2: float = 0.0
    im_a2: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in MEAN_ORDER])

    @classmethod
    def from_array(cls, values) -> "MeanState":
        values = np.asarray(values, dtype=float)
        if values.shape != (DIM,):
            raise ValueError(f"expected {DIM} components, got shape {values.shape}")
        return cls(**dict(zip(MEAN_ORDER, (float(x) for x in values))))


def default_params() -> SystemParams:
    """Baseline parameter set used throughout the bundled presets."""
    return SystemParams()


def _state_vector(state) -> np.ndarray:
    if isinstance(state, MeanState):
        return state.as_array()
    arr = np.asarray(state, dtype=float)
    if arr.shape != (DIM,):
        raise ValueError(f"mean state must have {DIM} components, got shape {arr.shape}")
    return arr


def drift_matrix(params: SystemParams, state, t: float) -> np.ndarray:
    """Linear generator M(t) of the fluctuation dynamics at one instant.

    Parameters
    ----------
    params : SystemParams
    state : MeanState or array-like of 8 floats
        Classical mean values the fluctuations are linearized around.
    t : float
        Time, which enters through the detuning modulation.

    Returns
    -------
    numpy.ndarray
        8x8 block matrix; the off-diagonal 4x4 blocks contain only the
        photon-exchange rate and vanish for ``lam = 0``.
    """
    out = np.empty((DIM, DIM))
    _kernels.drift_matrix(out, params.as_array(), _state_vector(state), float(t))
    return out


def noise_matrix(params: SystemParams) -> np.ndarray:
    """Constant diffusion matrix of the covariance dynamics.

    Mechanical momentum heats at ``gamma * (2 n_bath + 1)`` and each
    optical quadrature at ``kappa``; positions are noiseless.
    """
    return np.diag(noise_diagonal(params))


def noise_diagonal(params: SystemParams) -> np.ndarray:
    """Diagonal of :func:`noise_matrix` as a length-8 vector."""
    heat = params.gamma * (2.0 * params.n_bath + 1.0)
    return np.array([0.0, heat, params.kappa, params.kappa,
                     0.0, heat, params.kappa, params.kappa])


def vacuum_covariance() -> np.ndarray:
    """Covariance of the vacuum / mechanical ground state, V = I/2."""
    return 0.5 * np.eye(DIM)


def modulation_period(params: SystemParams) -> float:
    """Period of the detuning modulation, 2 pi / omega_c."""
    return TWO_PI / params.omega_c


def default_dt(params: SystemParams) -> float:
    """Default step size: 500 integration steps per modulation period."""
    return modulation_period(params) / 500.0
