"""Exception types shared across the library."""


class DualQuermassError(Exception):
    """Base class for all library errors."""


class ValidationError(DualQuermassError, ValueError):
    """Invalid construction input or parameter outside its documented range."""


class DimensionOutOfRange(ValidationError):
    """Ambient dimension not in the supported range 2..8."""


class OrderOutOfRange(ValidationError):
    """Quadrature order outside 1..512."""


class NonStarShaped(DualQuermassError):
    """A ray from the origin never leaves the body (unbounded direction)."""


class PointNotInterior(DualQuermassError):
    """Base point of an off-center radial evaluation is not strictly interior."""


class OriginNotInterior(DualQuermassError):
    """Requested body does not contain the origin as an interior point."""


class OddKernelPower(ValidationError):
    """Operation requires an even in-plane power m (polynomial kernel)."""


class EndpointSingularity(ValidationError):
    """Plain interval rule cannot handle the singular n = 2 surface weight."""


class IntegerOrder(ValidationError):
    """Fractional-derivative order is an integer; use the integer-order path."""


class InsufficientTaylor(ValidationError):
    """Profile does not carry enough Taylor coefficients for the request."""


class NonIntegrable(DualQuermassError):
    """Tail integral cannot be evaluated (no finite support bound)."""


class TOutOfRange(DualQuermassError):
    """Offset t outside the admissible interval of the operation."""


class DegenerateGrid(ValidationError):
    """Sample grid too small or degenerate for the requested fit."""
