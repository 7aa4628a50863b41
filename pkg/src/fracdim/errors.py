"""Exception types shared across the package."""


class FracdimError(Exception):
    """Base class for errors raised by fracdim."""


class ImageFormatError(FracdimError):
    """Input file is not a decodable image in a supported format."""


class InsufficientDataError(FracdimError):
    """Too few usable samples to select a scaling range or fit a slope."""


class InvalidRangeError(FracdimError):
    """A fit range is degenerate or contains unusable (blank) samples."""
