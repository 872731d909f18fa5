"""Double-parallelogram orientation constraint and the post-contact
construction of the virtual differential bar.

Frame: the crank pivot A is the origin, the slider point C sits l_AC above
it, and E is the fixed parallelogram anchor on the base. The mid-link line
passes through C inclined theta1 from vertical; theta1 and theta2 are the
second- and third-phalanx rotations from vertical, positive inward (+x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import NoIntersection, NoSolution
from .geometry import Point2
from .linkage import HoeckenDims

_PARALLEL_TOL = 1e-12


class GraspMode(Enum):
    PINCH = "Pinch"
    ENVELOPE = "Envelope"
    FAILURE = "Failure"


@dataclass(frozen=True)
class FingerParams:
    """Differential-pair and phalanx geometry plus spring constants.

    Lengths in mm, stiffness in N*mm/rad, torques in N*mm. h2_env is the
    fixed envelope-mode contact arm on the third phalanx; the pinch-mode
    contact arm is a per-call sweep variable (the two share a symbol in
    the source material but are distinct quantities).
    """

    AH: float = 38.0
    BH: float = 38.0
    AB0: float = 30.0
    EF: float = 30.0
    E: Point2 = field(default_factory=lambda: Point2(-30.0, 0.0))
    l1: float = 180.0
    h1: float = 150.0
    h2_env: float = 40.0
    k_d: float = 800.0
    tau1: float = 400.0
    tau_A: float = 400.0
    preload: float = 0.0
    hoecken: HoeckenDims = field(default_factory=HoeckenDims)

    def __post_init__(self):
        if self.AH <= 0.0 or self.BH <= 0.0:
            raise ValueError("differential arms AH, BH must be positive")
        if not 0.0 < self.AB0 < self.AH + self.BH:
            raise ValueError("AB0 must lie in (0, AH + BH)")
        if self.l1 <= 0.0 or self.h1 <= 0.0 or self.h2_env <= 0.0:
            raise ValueError("l1, h1, h2_env must be positive")
        if self.k_d < 0.0:
            raise ValueError("spring stiffness must be non-negative")
        if self.preload < 0.0:
            raise ValueError("stopper preload must be non-negative")
        if abs(self.EF - self.AB0) > 1e-9:
            raise ValueError("parallelogram requires EF = AB0")

    @property
    def A(self) -> Point2:
        return self.hoecken.A

    @property
    def C(self) -> Point2:
        return self.hoecken.C


@dataclass(frozen=True)
class FingerState:
    """Generalized coordinates of one finger plus its grasp mode."""

    theta1: float
    theta2: float
    mode: GraspMode

    def __post_init__(self):
        if not 0.0 <= self.theta1 < math.pi / 2.0:
            raise ValueError("theta1 must lie in [0, pi/2)")
        if self.mode is GraspMode.PINCH and self.theta2 != 0.0:
            raise ValueError("pinch mode keeps the distal phalanx vertical")
        if self.mode is GraspMode.ENVELOPE and self.theta2 < 0.0:
            raise ValueError("envelope rotation cannot be negative")
        if self.mode is GraspMode.FAILURE:
            raise ValueError("finger state carries Pinch or Envelope only")


def _mid_line_direction(theta1: float) -> Point2:
    # Unit direction of the mid-link line through C, theta1 from vertical,
    # tilted toward +x for positive theta1.
    return Point2(math.sin(theta1), math.cos(theta1))


def pre_contact_geometry(p: FingerParams, theta1: float) -> tuple[Point2, Point2]:
    """Pre-contact bar endpoint B0 and parallelogram joint F at tilt theta1.

    B0 is the intersection of the circle |P - A| = AB0 with the mid-link
    line through C, taking the root nearer to C so that B0 sits between A
    and C. F completes the parallelogram: F - E = B0 - A.
    """
    u = _mid_line_direction(theta1)
    w = p.C - p.A
    b = w.dot(u)
    disc = b * b - (w.dot(w) - p.AB0 * p.AB0)
    if disc < 0.0:
        raise NoIntersection(
            f"mid-link line misses the AB0 circle at theta1={theta1!r}")
    t = -b + math.sqrt(disc)
    B0 = Point2(p.C.x + t * u.x, p.C.y + t * u.y)
    F = p.E + (B0 - p.A)
    return B0, F


def theta2_pre(p: FingerParams, theta1: float) -> float:
    """Pre-contact angle of F->B0 against the +x axis (identically zero for
    the default horizontal base anchor, by the parallelogram)."""
    B0, F = pre_contact_geometry(p, theta1)
    d = B0 - F
    return math.atan2(d.y, d.x)


def locate_B(p: FingerParams, theta1: float, theta2: float) -> Point2:
    """Post-contact bar endpoint: B on the mid-link line with F->B at angle
    theta2 from +x. F stays locked at its pre-contact position for theta1."""
    _, F = pre_contact_geometry(p, theta1)
    u = _mid_line_direction(theta1)
    v = Point2(math.cos(theta2), math.sin(theta2))
    # Solve C + t*u = F + r*v; degenerate when the ray parallels the line.
    det = math.cos(theta1 + theta2)
    if abs(det) < _PARALLEL_TOL:
        raise NoSolution(
            f"BF ray parallel to the mid-link line at theta1={theta1!r}, "
            f"theta2={theta2!r}")
    w = F - p.C
    t = v.cross(w) / det
    r = u.cross(w) / det
    if r <= _PARALLEL_TOL:
        raise NoSolution(
            f"BF ray points away from the mid-link line at theta1={theta1!r}, "
            f"theta2={theta2!r}")
    return Point2(F.x + r * v.x, F.y + r * v.y)


def virtual_AB_length(p: FingerParams, theta1: float, theta2: float) -> float:
    """Length of the virtual differential bar |B(theta1, theta2) - A|."""
    return locate_B(p, theta1, theta2).distance_to(p.A)


def distal_orientation(state: FingerState) -> float:
    """Third-phalanx tilt from vertical: zero while the double parallelogram
    holds (pinch), theta2 once the differential has opened."""
    if state.mode is GraspMode.PINCH:
        return 0.0
    return state.theta2
