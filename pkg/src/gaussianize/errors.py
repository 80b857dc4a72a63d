"""Exception hierarchy. Every error raised on bad data derives from
:class:`GaussianizeError`; the CLI maps these to exit status 1."""


class GaussianizeError(Exception):
    pass


class DomainError(GaussianizeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class TransformOverflowError(GaussianizeError, ArithmeticError):
    """A transform produced a non-finite value (probability of exactly 0 or 1)."""


class DegenerateSampleError(GaussianizeError, ValueError):
    """Zero variance where a spread is required."""


class SampleTooSmallError(GaussianizeError, ValueError):
    pass


class FitError(GaussianizeError):
    pass


class ReliabilityError(GaussianizeError):
    pass


class DataFormatError(GaussianizeError, ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
