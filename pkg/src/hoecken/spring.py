"""Differential-spring state: opening angle, torque, and the geometric
sensitivities that couple the pair into the force balance.

The pair AH/BH hinges at H with a torsional spring; its opening angle
follows the virtual bar AB by the law of cosines. A stopper makes the
constraint one-sided: the pair never closes past its pre-contact angle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HoeckenError, NonSmooth, StopperLimit
from .finger import FingerParams, pre_contact_geometry, virtual_AB_length
from .geometry import triangle_angle

# Central-difference step for the sensitivities.
SENS_STEP = 1e-5

# Dead band below which the stopper is treated as seated: keeps the
# pre-contact pose at exactly zero torque despite roundoff in the
# bar construction.
STOPPER_DEADBAND = 1e-12


@dataclass(frozen=True)
class SpringStateSample:
    theta1: float
    theta2: float
    alpha: float
    alpha0: float
    tau_d: float
    s1: float
    s2: float


def opening_angle(p: FingerParams, theta1: float, theta2: float) -> float:
    """Hinge opening angle of the differential pair at a pose."""
    ab = virtual_AB_length(p, theta1, theta2)
    if ab >= p.AH + p.BH:
        raise StopperLimit(
            f"virtual bar {ab:.6g} mm at or past full opening "
            f"{p.AH + p.BH:.6g} mm")
    return triangle_angle(p.AH, p.BH, ab)


def rest_angle(p: FingerParams, theta1: float) -> float:
    """Pre-contact opening angle (constant for the default construction,
    since the pre-contact bar always has length AB0)."""
    B0, _ = pre_contact_geometry(p, theta1)
    return triangle_angle(p.AH, p.BH, B0.distance_to(p.A))


def spring_torque(p: FingerParams, theta1: float, theta2: float) -> float:
    """Spring torque k_d * (alpha - alpha0); zero while the stopper is
    seated (alpha <= alpha0)."""
    opening = opening_angle(p, theta1, theta2) - rest_angle(p, theta1)
    if opening <= STOPPER_DEADBAND:
        return 0.0
    return p.k_d * opening


def sensitivities(p: FingerParams, theta1: float, theta2: float,
                  step: float = SENS_STEP) -> tuple[float, float]:
    """Central-difference sensitivities (s1, s2) of the opening angle."""
    try:
        a1p = opening_angle(p, theta1 + step, theta2)
        a1m = opening_angle(p, theta1 - step, theta2)
        a2p = opening_angle(p, theta1, theta2 + step)
        a2m = opening_angle(p, theta1, theta2 - step)
    except HoeckenError as exc:
        raise NonSmooth(
            f"opening angle not evaluable near theta1={theta1!r}, "
            f"theta2={theta2!r}: {exc}") from exc
    return (a1p - a1m) / (2.0 * step), (a2p - a2m) / (2.0 * step)


def sample(p: FingerParams, theta1: float, theta2: float) -> SpringStateSample:
    """Full spring state at a pose."""
    alpha = opening_angle(p, theta1, theta2)
    alpha0 = rest_angle(p, theta1)
    s1, s2 = sensitivities(p, theta1, theta2)
    return SpringStateSample(
        theta1=theta1,
        theta2=theta2,
        alpha=alpha,
        alpha0=alpha0,
        tau_d=spring_torque(p, theta1, theta2),
        s1=s1,
        s2=s2,
    )
