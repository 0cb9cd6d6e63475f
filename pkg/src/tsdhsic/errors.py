"""Exception types raised across the package.

All errors derive from :class:`TsdhsicError`, itself a ``ValueError``, so
callers can catch bad input generically.
"""


class TsdhsicError(ValueError):
    pass


class EmptyInput(TsdhsicError):
    pass


class AllSamplesIdentical(TsdhsicError):
    pass


class DimensionMismatch(TsdhsicError):
    pass


class SizeMismatch(TsdhsicError):
    pass


class TooFewVariables(TsdhsicError):
    pass


class TooFewSamples(TsdhsicError):
    pass


class InstanceTooLarge(TsdhsicError):
    pass


class ModeMismatch(TsdhsicError):
    pass


class DegenerateLength(TsdhsicError):
    pass


class EmptyNull(TsdhsicError):
    pass


class BadOrder(TsdhsicError):
    pass


class SpecError(TsdhsicError):
    """Invalid generator or test configuration."""


class BandOutOfRange(TsdhsicError):
    pass


class SeriesTooShort(TsdhsicError):
    pass


class SingularRegression(TsdhsicError):
    pass


class ParseError(TsdhsicError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ContiguityViolation(TsdhsicError):
    pass


class NonFiniteValue(TsdhsicError):
    pass
