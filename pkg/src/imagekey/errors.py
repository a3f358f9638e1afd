"""Exception types shared across the library."""


class ImageKeyError(Exception):
    """Base class for all library errors."""


class InvalidKeyError(ImageKeyError):
    """Secret key material is missing, too short, or malformed."""


class DimensionError(ImageKeyError):
    """Image shape violates an operation's requirements (e.g. non-divisible block grid)."""


class FormatError(ImageKeyError):
    """A file is not a well-formed binary PGM/PPM with maxval 255."""


class NotInvertibleError(ImageKeyError):
    """The requested transform has no exact inverse."""
