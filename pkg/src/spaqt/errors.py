"""Exception types raised across the package."""


class SpaqtError(Exception):
    """Base class for all package errors."""


class UnknownGroupName(SpaqtError, KeyError):
    pass


class NotProjective(SpaqtError, ValueError):
    """Some product V_g V_h is not proportional to V_gh."""


class NotRootOfUnity(SpaqtError, ValueError):
    pass


class DimensionMismatch(SpaqtError, ValueError):
    pass


class ShapeMismatch(SpaqtError, ValueError):
    pass


class DegenerateFixedSpace(SpaqtError, RuntimeError):
    """A channel has more than one independent fixed point (rep not irreducible)."""


class NonUnitaryFixedPoint(SpaqtError, RuntimeError):
    pass


class NonOrthonormalStates(SpaqtError, ValueError):
    pass


class BadChainLength(SpaqtError, ValueError):
    pass


class BadBoundaryIndex(SpaqtError, ValueError):
    pass


class AxisNotUnit(SpaqtError, ValueError):
    pass


class AxesNotOrthogonal(SpaqtError, ValueError):
    pass


class DimensionCap(SpaqtError, ValueError):
    pass


class NoGap(SpaqtError, RuntimeError):
    pass


class DegeneracyChange(SpaqtError, RuntimeError):
    """Ground-space dimension changed along a transport path (level crossing)."""


class NonConvergent(SpaqtError, RuntimeError):
    pass


class NotUnitAxis(AxisNotUnit):
    pass


class ParallelAxes(SpaqtError, ValueError):
    pass


class ConfigError(SpaqtError, ValueError):
    pass


class UnsupportedFormat(SpaqtError, ValueError):
    pass
