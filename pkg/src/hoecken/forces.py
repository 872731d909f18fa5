"""Quasi-static grasp forces for both modes.

Pinch: motor torque at A maps through the drive Jacobian to a horizontal
force at D, then through the mid-joint moment balance to the contact force
on the third phalanx. Envelope: the actuation torque and the differential
spring balance the two normal contact forces via virtual work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLever, SingularJacobian
from .finger import FingerParams, FingerState, GraspMode, distal_orientation
from .geometry import Point2
from .linkage import dxD_dthetaA
from .spring import sensitivities, spring_torque

_JACOBIAN_EPS = 1e-9
_LEVER_EPS = 1e-9


@dataclass(frozen=True)
class EnvelopeForces:
    """Normal contact forces on the second (F2) and third (F3) phalanx, N.
    F3 is reported signed; configurations that unload the distal contact
    drive it negative."""

    F2: float
    F3: float


def pinch_drive_force(tau_A: float, dxD: float) -> float:
    """Horizontal drive force at D from motor torque, by virtual work."""
    if abs(dxD) <= _JACOBIAN_EPS:
        raise SingularJacobian(
            f"drive Jacobian {dxD!r} mm/rad too close to a stationary point")
    return tau_A / dxD


def mid_joint_torque(F_Dx: float, r_eq: float) -> float:
    """Mid-joint torque from the drive force and an effective moment arm."""
    if r_eq <= 0.0:
        raise ValueError("effective moment arm must be positive")
    return F_Dx * r_eq


def pinch_force(M_mid: float, h2: float, theta1: float, l1: float) -> float:
    """Contact force on the third phalanx from the mid-joint moment balance:
    the contact sits h2 along the (vertical) distal link whose base sits
    l1*cos(theta1) above the mid joint."""
    denom = h2 + l1 * math.cos(theta1)
    if denom <= _LEVER_EPS:
        raise DegenerateLever(
            f"moment-balance lever h2 + l1*cos(theta1) = {denom!r} collapsed")
    return M_mid / denom


def pinch_force_chain(p: FingerParams, theta_A: float, theta1: float,
                      h2: float, tau_A: float | None = None,
                      r_eq: float | None = None,
                      J_x: float | None = None) -> float:
    """Full pinch chain: drive torque -> F_Dx -> mid torque -> contact force.

    With r_eq and J_x supplied the chain uses those constants (the
    constant-arm surface form used for the force maps). Otherwise the drive
    Jacobian is evaluated at theta_A and the moment arm is the vertical
    projection of the mid link, l1*cos(theta1); the drive magnitude is used,
    the closing direction having negative dx_D/dtheta_A.
    """
    if tau_A is None:
        tau_A = p.tau_A
    if (r_eq is None) != (J_x is None):
        raise ValueError("supply both r_eq and J_x, or neither")
    if r_eq is not None:
        F_Dx = pinch_drive_force(tau_A, J_x)
        M = mid_joint_torque(F_Dx, r_eq)
    else:
        J = dxD_dthetaA(p.hoecken, theta_A)
        F_Dx = pinch_drive_force(tau_A, abs(J))
        M = mid_joint_torque(F_Dx, p.l1 * math.cos(theta1))
    return pinch_force(M, h2, theta1, p.l1)


def _balance_terms(p: FingerParams, theta1: float, theta2: float,
                   h1: float | None, h2: float | None):
    h1v = p.h1 if h1 is None else h1
    h2v = p.h2_env if h2 is None else h2
    if h1v <= 0.0 or h2v <= 0.0:
        raise ValueError("contact arms must be positive")
    tau_d = spring_torque(p, theta1, theta2)
    s1, s2 = sensitivities(p, theta1, theta2)
    return h1v, h2v, tau_d, s1, s2


def envelope_forces(p: FingerParams, theta1: float, theta2: float,
                    h1: float | None = None,
                    h2: float | None = None) -> EnvelopeForces:
    """Closed-form envelope contact forces.

    F3 = -tau_d*s2/h2 and F2 = (tau1 - tau_d*s1)/h1 - (l1*cos(theta2 -
    theta1)/h1)*F3; identical to the 2x2 moment-balance solve.
    """
    h1v, h2v, tau_d, s1, s2 = _balance_terms(p, theta1, theta2, h1, h2)
    F3 = -tau_d * s2 / h2v
    F2 = (p.tau1 - tau_d * s1) / h1v - (p.l1 * math.cos(theta2 - theta1) / h1v) * F3
    return EnvelopeForces(F2=F2, F3=F3)


def envelope_forces_matrix(p: FingerParams, theta1: float, theta2: float,
                           h1: float | None = None,
                           h2: float | None = None) -> EnvelopeForces:
    """Envelope forces via the explicit 2x2 linear solve (cross-check route)."""
    h1v, h2v, tau_d, s1, s2 = _balance_terms(p, theta1, theta2, h1, h2)
    A = np.array([[h1v, p.l1 * math.cos(theta2 - theta1)],
                  [0.0, h2v]])
    b = np.array([p.tau1 - tau_d * s1, -tau_d * s2])
    F2, F3 = np.linalg.solve(A, b)
    return EnvelopeForces(F2=float(F2), F3=float(F3))


def virtual_work_residual(p: FingerParams, theta1: float, theta2: float,
                          forces: EnvelopeForces,
                          h1: float | None = None,
                          h2: float | None = None) -> tuple[float, float]:
    """Residual of the virtual-work balance per unit virtual displacement,
    one component per generalized coordinate. Zero at equilibrium."""
    h1v, h2v, tau_d, s1, s2 = _balance_terms(p, theta1, theta2, h1, h2)
    r1 = (p.tau1 - tau_d * s1) - (forces.F2 * h1v
                                  + forces.F3 * p.l1 * math.cos(theta2 - theta1))
    r2 = -tau_d * s2 - forces.F3 * h2v
    return r1, r2


def force_directions(theta1: float, theta2: float) -> tuple[Point2, Point2]:
    """Unit normal directions of the two contact forces (each orthogonal to
    its phalanx axis)."""
    return (Point2(math.cos(theta1), -math.sin(theta1)),
            Point2(math.cos(theta2), -math.sin(theta2)))


def contact_kinematics(p: FingerParams, state: FingerState):
    """Contact points G1, G2 (mid-joint frame) and their Jacobian columns.

    Returns (G1, G2, (dG1/dtheta1, dG1/dtheta2), (dG2/dtheta1, dG2/dtheta2)).
    """
    t1 = state.theta1
    t2 = distal_orientation(state)
    G1 = Point2(p.h1 * math.sin(t1), p.h1 * math.cos(t1))
    G2 = Point2(p.l1 * math.sin(t1) + p.h2_env * math.sin(t2),
                p.l1 * math.cos(t1) + p.h2_env * math.cos(t2))
    dG1 = (Point2(p.h1 * math.cos(t1), -p.h1 * math.sin(t1)),
           Point2(0.0, 0.0))
    dG2 = (Point2(p.l1 * math.cos(t1), -p.l1 * math.sin(t1)),
           Point2(p.h2_env * math.cos(t2), -p.h2_env * math.sin(t2)))
    return G1, G2, dG1, dG2


def pinch_state(theta1: float) -> FingerState:
    return FingerState(theta1=theta1, theta2=0.0, mode=GraspMode.PINCH)
