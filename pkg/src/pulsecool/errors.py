"""Exception hierarchy shared across the package.

Two failure families matter to callers: bad inputs (configs, parameters,
malformed envelopes) and numerical trouble during integration.  The CLI maps
them to distinct exit codes, so keep new exceptions inside one of the two
branches.
"""


class PulsecoolError(Exception):
    """Base class for all package errors."""


class ValidationError(PulsecoolError):
    """Invalid parameters, configuration, or incompatible inputs."""


class GridMismatchError(ValidationError):
    """Two trajectories were compared on different time grids."""


class NumericalError(PulsecoolError):
    """Integration produced an unusable result.

    Carries ``t`` when the failure has a well-defined onset time.
    """

    def __init__(self, message: str, t: float | None = None):
        if t is not None:
            message = f"{message} (at t={t:.6g})"
        super().__init__(message)
        self.t = t


class NonFiniteStateError(NumericalError):
    """State vector left the finite range (overflow or NaN)."""


class QuadratureError(NumericalError):
    """Kernel quadrature failed its step tolerance."""


class DipNotFoundError(NumericalError):
    """A pulse-duration design run found no phonon-number dip."""
