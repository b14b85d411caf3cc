"""Exception types shared across the package."""


class KinematicsError(Exception):
    """Base class for all errors raised by etskin."""


class NotSkewSymmetric(KinematicsError):
    """Matrix handed to vex3 is not skew-symmetric within tolerance."""


class NotAugmentedSkew(KinematicsError):
    """Matrix handed to vex6 is not an augmented skew matrix within tolerance."""


class ParseError(KinematicsError):
    """ETS text could not be parsed.

    ``offset`` is the byte offset of the offending token in the input.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DimensionMismatch(KinematicsError):
    """A vector argument has the wrong length for the model."""


class RangeError(KinematicsError):
    """An index or index range is out of bounds."""


class SchemaError(KinematicsError):
    """A model document does not conform to the expected schema."""


class LimitError(KinematicsError):
    """Joint limit metadata is inconsistent with the model."""
