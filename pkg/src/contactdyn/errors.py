"""Exception hierarchy shared by all modules."""


class ContactError(Exception):
    """Base class for every error raised by contactdyn."""


class InvalidState(ContactError, ValueError):
    pass


class NonPositiveLambda(InvalidState):
    pass


class NonFinite(InvalidState, ArithmeticError):
    pass


class DimensionMismatch(InvalidState):
    pass


class StepSingular(ContactError, ArithmeticError):
    """A step denominator ``1 -/+ (h/2) K_z`` fell below the singularity threshold."""


class IntegrationError(ContactError):
    """A step failed inside :func:`contactdyn.integrator.integrate`.

    Carries the index of the failing step and the trajectory recorded up to
    (and excluding) that step.
    """

    def __init__(self, step: int, cause: Exception, trajectory):
        super().__init__(f"step {step}: {type(cause).__name__}: {cause}")
        self.step = step
        self.cause = cause
        self.trajectory = trajectory


class InvalidSpec(ContactError, ValueError):
    pass


class InvalidConfig(ContactError, ValueError):
    pass


class OverdampedUnsupported(ContactError, ValueError):
    pass


class InsufficientData(ContactError, ValueError):
    pass


class EmptyTrajectory(ContactError, ValueError):
    pass


class UnsupportedModel(ContactError, ValueError):
    pass


class LengthMismatch(ContactError, ValueError):
    pass


class TooShort(ContactError, ValueError):
    pass


class NoCrossings(ContactError, ValueError):
    pass
