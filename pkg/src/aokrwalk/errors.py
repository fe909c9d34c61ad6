class WalkError(Exception):
    """Base class for numerical failures raised by this package."""


class TruncationError(WalkError):
    """Probability reached the edge of the momentum lattice."""


class AliasingError(WalkError):
    """Angle grid too coarse for the quadrature oracle."""


class SizeError(WalkError):
    """Requested order exceeds the configured maximum."""
