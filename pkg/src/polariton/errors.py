"""Exception and warning types shared across the package."""


class PolaritonError(Exception):
    """Base class for all package errors."""


class DegenerateDetuning(PolaritonError):
    """A transmon-resonator detuning Delta_j is too close to zero."""


class DimensionMismatch(PolaritonError):
    """Operator shape incompatible with the requested Hilbert space."""


class NonHermitianInput(PolaritonError):
    """A matrix required to be Hermitian is not."""


class AnchorAmbiguous(PolaritonError):
    """Polariton labels cannot be anchored: dominant overlaps too small."""


class DegenerateSteadyState(PolaritonError):
    """Liouvillian nullspace dimension exceeds one."""


class NoConvergence(PolaritonError):
    """Continued-fraction ladder did not converge within N_max."""


class SingularLadderMatrix(PolaritonError):
    """A ladder matrix (L0 - i n Delta + ...) is numerically singular."""


class StepTooLarge(PolaritonError):
    """Time integration lost the trace beyond tolerance."""


class FlatGrid(PolaritonError):
    """Grid has no dynamic range to normalize."""


class NoCrossing(PolaritonError):
    """Crossing condition has no root in the search bracket."""


class ConfigError(PolaritonError):
    """Run configuration is malformed; message carries the key path."""


class SweepFailed(PolaritonError):
    """Too many grid cells failed to converge.

    The partial sweep output stays available as ``result`` so the failed
    cells can be inspected or the healthy columns salvaged.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class AmbiguousTracking(UserWarning):
    """Branch tracking overlap fell below threshold; assignment may be unstable."""


class DispersiveValidityWarning(UserWarning):
    """First-order dressed states requested outside their validity range."""
