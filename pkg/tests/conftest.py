import numpy as np
import pytest

from optosync import SystemParams, Trajectory, default_params


@pytest.fixture
def params():
    return default_params()


@pytest.fixture
def decoupled_params():
    """Linear single-cavity regime: no optomechanics, no fiber, no modulation."""
    return SystemParams(g=0.0, lam=0.0, A_c=0.0)


def make_trajectory(times, means, params=None, covs=None):
    """Assemble a synthetic Trajectory from mean-state samples."""
    times = np.asarray(times, dtype=float)
    means = np.asarray(means, dtype=float)
    if covs is None:
        covs = np.broadcast_to(0.5 * np.eye(8), (len(times), 8, 8)).copy()
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    return Trajectory(times=times, means=means, covs=covs,
                      params=params if params is not None else default_params(),
                      dt=float(dt), record_stride=1)


@pytest.fixture
def synthetic_trajectory():
    return make_trajectory
