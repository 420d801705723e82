"""Exception hierarchy shared across the package."""


class OptosyncError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteError(OptosyncError):
    """A state entry became NaN or infinite during integration.

    Usually signals an unstable parameter regime or a step size that is
    too large for the fastest frequency in the system.
    """

    def __init__(self, time):
        self.time = float(time)
        super().__init__(f"state became non-finite at t = {self.time:g}")


class DegeneratePhaseError(OptosyncError):
    """Phase requested at a point too close to the phase-space origin."""

    def __init__(self, time=None):
        self.time = time
        msg = "phase undefined: |q| and |p| both below tolerance"
        if time is not None:
            msg += f" at t = {time:g}"
        super().__init__(msg)


class NonPositiveDenominatorError(OptosyncError):
    """A synchronization measure denominator was not positive.

    Physical covariance matrices always give strictly positive error
    variances, so this marks an unphysical input.
    """


class EmptyWindowError(OptosyncError):
    """An averaging window contains fewer than two samples."""


class TooShortError(OptosyncError):
    """A trajectory is too short for the requested analysis."""


class UnknownRecipeError(OptosyncError):
    """An unrecognized preset name was requested."""
