"""Exception types shared across the package."""


class SpinphaseError(Exception):
    """Base class for all package errors."""


class NonCyclicError(SpinphaseError):
    """No cyclic solution was found within the requested tolerance/horizon."""


class DegenerateFrameError(SpinphaseError):
    """Effective precession frame is degenerate (vanishing precession rate)."""


class UndefinedSolidAngleError(SpinphaseError):
    """Solid angle requested for a trace of (numerically) zero mean momentum."""


class AntipodePassageError(SpinphaseError):
    """Trajectory passes through the antipode of the quadrature pole."""


class PoleGuardError(SpinphaseError):
    """No frame rotation keeps the trace away from the coordinate poles."""


class NumericalTrustError(SpinphaseError):
    """A cross-check residual exceeded its trust tolerance."""


class ScenarioSchemaError(SpinphaseError):
    """Scenario or sweep configuration file violates the documented schema."""


class StepSizeWarning(UserWarning):
    """Integration step resolves less than the recommended rotation per step."""
