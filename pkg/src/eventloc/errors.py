"""Exception hierarchy shared by the event-location modules."""


class EventLocError(Exception):
    """Base class for all errors raised by :mod:`eventloc`."""


class NonNegativeStart(EventLocError):
    """The initial state already satisfies ``g(x0) >= 0``."""


class TransversalityViolation(EventLocError):
    """``grad g(x)^T f(x)`` dropped below the problem's ``delta_min``."""

    def __init__(self, value, delta_min, where=None):
        self.value = value
        self.delta_min = delta_min
        self.where = where
        msg = f"grad g^T f = {value:.3e} < delta_min = {delta_min:.1e}"
        if where is not None:
            msg += f" ({where})"
        super().__init__(msg)


class GradientMismatch(EventLocError):
    """The supplied gradient disagrees with finite differences of ``g``."""


class UnknownProblem(EventLocError, KeyError):
    pass


class DegenerateGradient(EventLocError):
    """The quadrature average of ``grad g`` over the stages is (nearly) zero."""


class NoConvergence(EventLocError):
    """The fixed-point iteration hit its iteration cap."""

    def __init__(self, iterations, residual, step_index=None):
        self.iterations = iterations
        self.residual = residual
        self.step_index = step_index
        msg = f"fixed-point iteration stalled after {iterations} iterations (residual {residual:.3e})"
        if step_index is not None:
            msg = f"step {step_index}: " + msg
        super().__init__(msg)


class UnsupportedDimension(EventLocError):
    pass
