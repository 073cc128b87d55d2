"""Exception hierarchy shared by every module of the package."""


class VisangleError(ValueError):
    """Base class for all errors raised by visangle."""


class DimensionMismatch(VisangleError):
    pass


class DegenerateVertex(VisangleError):
    pass


class DegeneratePoints(VisangleError):
    pass


class CoincidentPoints(DegeneratePoints):
    pass


class InvalidParameter(VisangleError):
    pass


class OutOfInterval(InvalidParameter):
    pass


class InvalidGrid(InvalidParameter):
    pass


class OutsideDomain(VisangleError):
    pass


class OnBoundary(OutsideDomain):
    pass


class UnsupportedDomain(VisangleError):
    pass


class KindMismatch(VisangleError):
    pass


class MapDomainMismatch(VisangleError):
    pass


class InternalConsistencyError(ArithmeticError):
    """A floating-point guard tripped by more than round-off."""
