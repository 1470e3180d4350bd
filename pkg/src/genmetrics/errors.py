"""Exception hierarchy shared by the library and the command line."""


class GenMetricsError(Exception):
    """Base class for every error raised by genmetrics."""


class InputError(GenMetricsError, ValueError):
    """Invalid, inconsistent or missing input. The CLI exits with status 2."""


class NumericalConsistencyError(GenMetricsError, ArithmeticError):
    """A computation produced a value outside its mathematical range.

    The CLI exits with status 3.
    """


class TensorFormatError(InputError):
    """Malformed tensor file."""


class BadMagicError(TensorFormatError):
    pass


class UnsupportedVersionError(TensorFormatError):
    pass


class UnsupportedDtypeError(TensorFormatError):
    pass


class UnsupportedRankError(TensorFormatError):
    pass


class TruncatedPayloadError(TensorFormatError):
    pass


class DimsOverflowError(TensorFormatError):
    pass
