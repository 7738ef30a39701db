"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation failed to converge within its budget.

    Carries the number of iterations (or panels) spent before giving up.
    """

    def __init__(self, message, iterations=None):
        if iterations is not None:
            message = f"{message} (after {iterations} iterations)"
        super().__init__(message)
        self.iterations = iterations


class GridMismatchError(ValueError):
    """Two grid-indexed objects do not share a common grid."""


class InsufficientSamplingError(ValueError):
    """A sampled function does not cover enough of its domain for the analysis."""


class ConfigError(ValueError):
    """A run configuration failed validation.

    ``field`` names the offending entry so command-line users get a precise
    diagnostic.
    """

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
