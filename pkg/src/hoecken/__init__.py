"""Planar analysis toolkit and quasi-static grasp simulator for a
Hoecken-linkage underactuated gripper."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateLever,
    DegenerateTriangle,
    HoeckenError,
    InsufficientTravel,
    InvalidObject,
    NoIntersection,
    NonSmooth,
    NoSolution,
    NotEnveloping,
    SingularJacobian,
    StopperLimit,
    TargetMismatch,
    UnknownVariable,
)
from .finger import FingerParams, FingerState, GraspMode
from .geometry import Box, Circle, ObjectShape, Point2, Segment2, ThinPlate
from .linkage import HoeckenDims, PathTrace

__all__ = [
    "__version__",
    "Box",
    "Circle",
    "ConfigError",
    "DegenerateLever",
    "DegenerateTriangle",
    "FingerParams",
    "FingerState",
    "GraspMode",
    "HoeckenDims",
    "HoeckenError",
    "InsufficientTravel",
    "InvalidObject",
    "NoIntersection",
    "NonSmooth",
    "NoSolution",
    "NotEnveloping",
    "ObjectShape",
    "PathTrace",
    "Point2",
    "Segment2",
    "SingularJacobian",
    "StopperLimit",
    "TargetMismatch",
    "ThinPlate",
    "UnknownVariable",
]
