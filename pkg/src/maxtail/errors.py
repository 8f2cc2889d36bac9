"""Exception types. Each carries the CLI exit status it maps to."""


class MaxTailError(Exception):
    exit_code = 1


class ParameterError(MaxTailError, ValueError):
    """A distribution or model parameter is outside its domain."""

    exit_code = 4


class ConfigError(ParameterError):
    exit_code = 4


class PositivityError(MaxTailError, ValueError):
    """The data contain a value <= 0 (or NaN)."""

    exit_code = 3

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InsufficientDataError(MaxTailError, ValueError):
    exit_code = 3


class IngestionError(MaxTailError):
    exit_code = 3

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class RangeError(MaxTailError, ValueError):
    """A scale range or order-statistic index is not admissible."""

    exit_code = 4


class CovarianceError(MaxTailError, ValueError):
    exit_code = 6


class NumericalError(MaxTailError, ArithmeticError):
    exit_code = 6


class DegenerateEstimateError(MaxTailError, ArithmeticError):
    """The fitted slope H is not positive, so alpha = 1/H is undefined."""

    exit_code = 5

    def __init__(self, h, message=None):
        super().__init__(message or f"degenerate estimate: H = {h!r} is not positive beyond rounding error")
        self.h = h


class DegenerateEstimateWarning(RuntimeWarning):
    pass


class InstabilityWarning(RuntimeWarning):
    pass
