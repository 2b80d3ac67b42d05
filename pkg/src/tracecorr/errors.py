"""Exception types raised across the package."""


class TraceCorrError(Exception):
    """Base class for all package errors."""


class NonHermitianInput(TraceCorrError, ValueError):
    pass


class ParameterOutOfRange(TraceCorrError, ValueError):
    pass


class IncompleteKrausSet(TraceCorrError, ValueError):
    pass


class NoTransition(TraceCorrError):
    """The requested trajectory has no sudden change of the classical correlation."""


class StepTooLarge(TraceCorrError, ValueError):
    pass


class InvalidState(TraceCorrError, ValueError):
    """Parameters do not describe a positive semidefinite, unit-trace X state."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(TraceCorrError, ValueError):
    pass
