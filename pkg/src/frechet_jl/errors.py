"""Exception hierarchy shared by all modules."""


class FrechetJLError(Exception):
    """Base class for every error raised by this package."""


class DegenerateCurve(FrechetJLError, ValueError):
    pass


class DimensionMismatch(FrechetJLError, ValueError):
    pass


class ParamOutOfRange(FrechetJLError, ValueError):
    pass


class BadIndices(FrechetJLError, IndexError):
    pass


class InvalidSequence(FrechetJLError, ValueError):
    pass


class CapExceeded(FrechetJLError, ValueError):
    """An exhaustive routine was asked to run on an instance above its hard cap."""


class Infeasible(FrechetJLError, ValueError):
    pass


class PreconditionFailed(FrechetJLError, ValueError):
    pass


class RetriesExhausted(FrechetJLError, RuntimeError):
    """Raised when no sampled map passed certification.

    The last failing report is available as ``report``.
    """

    def __init__(self, message, report=None, linear_map=None):
        super().__init__(message)
        self.report = report
        self.linear_map = linear_map


class TooFewCurves(FrechetJLError, ValueError):
    pass


class CandidateBudgetExceeded(FrechetJLError, ValueError):
    pass


class ParseError(FrechetJLError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
