"""Exception hierarchy shared by all chromaboltz modules."""


class ChromaBoltzError(Exception):
    """Base class for all errors raised by this package."""


class SpecSyntaxError(ChromaBoltzError):
    """Malformed specification text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownNameError(ChromaBoltzError):
    """A class reference does not resolve to any definition."""


class DuplicateDefinitionError(ChromaBoltzError):
    """The same class name is defined twice."""


class InvalidParameterError(ChromaBoltzError):
    """A numeric parameter is outside its admissible range."""


class DivergenceError(ChromaBoltzError):
    """Generating-function evaluation diverged (x at or above the
    dominant singularity, or an unsummable tail)."""


class CapExceededError(ChromaBoltzError):
    """A requested truncation order exceeds the configured cap."""


class NoProfileError(ChromaBoltzError):
    """No profile of the requested weight has a nonzero coefficient."""


class NoSolutionError(ChromaBoltzError):
    """The tuning equation has no solution below the singularity.

    Carries ``best_x`` and ``best_size``, the closest admissible point
    found; callers may still sample there.
    """

    def __init__(self, message: str, best_x: float = 0.0,
                 best_size: float = 0.0):
        super().__init__(message)
        self.best_x = best_x
        self.best_size = best_size


class DepthExceededError(ChromaBoltzError):
    """A single sample exceeded the constructor-call budget."""


class SampleTimeoutError(ChromaBoltzError):
    """A rejection loop exceeded its attempt cap."""


class InsufficientDataError(ChromaBoltzError):
    """Too few buckets survive merging for a goodness-of-fit test."""
