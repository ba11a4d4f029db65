"""Exception types shared across the package."""


class EffixError(Exception):
    """Base class for all library errors."""


class InputError(EffixError):
    """Malformed or inconsistent user input (bad document, unknown label,
    non-partition ranking, cap violation).  The CLI maps this to exit code 2.
    """


class CapExceededError(InputError):
    """An enumeration or factorial cap was exceeded."""


class InfeasibleRepresentationError(EffixError):
    """Raised when a utilitarian-representation system is infeasible,
    i.e. the lottery handed in was not ex-ante efficient.  Carries the
    exact Farkas certificate of the infeasibility.
    """

    def __init__(self, message, farkas):
        super().__init__(message)
        self.farkas = farkas
