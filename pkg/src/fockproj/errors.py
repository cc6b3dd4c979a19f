"""Exception types raised across the package."""


class FockError(ValueError):
    """Base class for invalid-input errors in this package."""


class DimensionError(FockError):
    """An index, rank or region does not fit in the working dimension."""


class NotHermitianError(FockError):
    pass


class EigenvalueRangeError(FockError):
    pass


class NotProjectorError(FockError):
    pass


class InvalidDensityError(FockError):
    pass


class NonConfiningPotentialError(FockError):
    pass


class TruncationError(FockError):
    """The working dimension is too small for the requested region or label."""


class InvalidHistoryError(FockError):
    pass
