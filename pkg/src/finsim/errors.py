"""Exception types shared across finsim."""


class FinsimError(Exception):
    """Base class for all finsim errors."""


class InvalidInputError(FinsimError, ValueError):
    """An argument or configuration value violates its contract.

    ``field`` names the offending attribute when there is one, so callers can
    report a full path such as ``body.joint_stiffness[2]``.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NumericalDivergenceError(FinsimError, ArithmeticError):
    """The integrator produced a non-finite value."""

    def __init__(self, joint, t):
        self.joint = joint
        self.t = t
        super().__init__(f"non-finite state in {joint} at t={t:.6g} s")


class NoUniqueMinimumError(FinsimError):
    """The lateral displacement profile has no distinct minimum."""


class InsufficientOscillationError(FinsimError, ValueError):
    """A series does not oscillate enough to estimate a frequency."""
