"""
Exception hierarchy for the next-bit coder.
"""

from typing import Optional


class CodingError(Exception):
    """Base class for every error raised by the library."""

    pass


class ConfigError(CodingError):
    """Invalid source, predictor or experiment configuration."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class ZeroMassPrefix(CodingError):
    """The conditional distribution is undefined: no sample extends the prefix."""

    pass


class SupportTooLarge(CodingError):
    """Exhaustive enumeration was requested for an output length that is too long."""

    pass


class InvalidLength(CodingError):
    """A bit string or index does not fit the source's output length."""

    pass


class MalformedEncoding(CodingError):
    """A container could not be parsed or is inconsistent with the decoder."""

    pass


class VectorMismatch(CodingError):
    """A golden vector did not reproduce bit-exactly."""

    def __init__(self, message: str, bit_index: Optional[int] = None):
        self.bit_index = bit_index
        super().__init__(message)
