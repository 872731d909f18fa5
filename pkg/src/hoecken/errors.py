"""Exception types shared across the toolkit."""


class HoeckenError(Exception):
    """Base class for all toolkit errors."""


class DegenerateTriangle(HoeckenError):
    """Triangle inequality violated beyond tolerance."""


class InsufficientTravel(HoeckenError):
    """No crank window achieves the requested horizontal travel."""


class NoIntersection(HoeckenError):
    """Pre-contact circle/line construction has no solution."""


class NoSolution(HoeckenError):
    """Post-contact bar construction is inconsistent at this pose."""


class StopperLimit(HoeckenError):
    """Differential pair fully opened: virtual bar at or past AH + BH."""


class NonSmooth(HoeckenError):
    """Finite-difference stencil crosses an infeasible pose."""


class SingularJacobian(HoeckenError):
    """Drive Jacobian too close to zero to invert."""


class DegenerateLever(HoeckenError):
    """Moment-balance lever arm collapsed to zero."""


class NotEnveloping(HoeckenError):
    """Simulation outcome is not an enveloping grasp."""


class InvalidObject(HoeckenError):
    """Object overlaps the fingers or palm at the start pose."""


class UnknownVariable(HoeckenError):
    """Sweep variable name not recognized."""


class TargetMismatch(HoeckenError):
    """Sweep variable is not consumed by the selected target."""


class ConfigError(HoeckenError):
    """Configuration file invalid."""
