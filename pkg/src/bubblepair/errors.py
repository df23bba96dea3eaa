"""Exception hierarchy for the bubblepair package."""


class BubblePairError(Exception):
    """Base class for all package errors."""


class InvalidParamsError(BubblePairError, ValueError):
    """A parameter or configuration value violates its constraints."""


class ModelBreakdownError(BubblePairError):
    """The model left its domain of validity (collapse, singular solve,
    step-size underflow). Continuing would produce unphysical numbers."""


class NearSingularError(ModelBreakdownError):
    """The 2x2 wall-acceleration system is numerically singular."""


class RadiusFloorError(ModelBreakdownError):
    """A bubble radius dropped below the collapse floor during integration."""


class StepUnderflowError(ModelBreakdownError):
    """The adaptive step size underflowed; the problem is locally stiff or
    the trajectory is breaking down."""


class TangentDegenerateError(BubblePairError):
    """The propagated tangent frame lost rank or underflowed."""


class NotConvergedError(BubblePairError):
    """A Lyapunov spectrum did not pass its convergence gate, so the caller
    asked for something (e.g. a classification) that needs a converged one."""

    def __init__(self, message, spectrum=None):
        super().__init__(message)
        self.spectrum = spectrum
