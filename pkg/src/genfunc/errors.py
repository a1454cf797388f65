"""Exception hierarchy."""


class GenfuncError(Exception):
    """Base class for all package errors."""


class IndexOutOfTruncation(GenfuncError, ValueError):
    pass


class DimensionMismatch(GenfuncError, ValueError):
    pass


class AxisOutOfRange(GenfuncError, ValueError):
    pass


class SingularSystem(GenfuncError, ArithmeticError):
    pass


class GridTooCoarse(GenfuncError, ValueError):
    pass


class NegativeZ(GenfuncError, ValueError):
    pass


class TaylorCapTooLarge(GenfuncError, ValueError):
    pass


class WeightTooSmall(GenfuncError, ValueError):
    pass


class GridNotDecayed(GenfuncError, ValueError):
    """Velocity-grid data has not decayed at the grid edges."""


class OutsideConvergence(GenfuncError, ValueError):
    pass


class TooFewModes(GenfuncError, ValueError):
    pass


class DomainMismatch(GenfuncError, ValueError):
    pass


class GridMismatch(GenfuncError, ValueError):
    pass


class CFLViolation(GenfuncError, ValueError):
    pass


class NotDivergenceFree(GenfuncError, ValueError):
    pass


class ConfigError(GenfuncError, ValueError):
    pass


class BlowupDetected(GenfuncError, ArithmeticError):
    """Raised when a Galerkin state leaves the representable range.

    The partially filled :class:`~genfunc.models.SimulationRecord` is kept in
    ``record`` (``None`` when raised from a single step).
    """

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record
