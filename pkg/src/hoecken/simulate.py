"""Quasi-static closure of the two-finger hand on a 2-D object.

The grasp plane is the linkage plane. Both fingers close along x toward
the hand centerline x = 0; y measures depth from the crank-pivot line.
Contact is carried by two zones per finger: the outer stretch of the mid
link (from arm bd_arm[0] to bd_arm[1] out of the joint B) and the distal
link (up to distal_length beyond the carrier point D). The inner stretch
of the mid link and the crank run in an offset plane and never touch the
object.

Closure is stepped deterministically over the crank's straight-line
window. Distal-first contact ends in a parallel pinch; mid-link-first
contact blocks the crank and, once the differential spring overcomes the
stopper preload, rotates the distal link inward until it meets the object
(envelope). Residual penetration at termination is bounded by the contact
bisection tolerance, not by the step size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .errors import HoeckenError, InvalidObject, NotEnveloping, StopperLimit
from .finger import FingerParams, FingerState, GraspMode
from .geometry import (
    Box,
    Circle,
    ObjectShape,
    Point2,
    Segment2,
    ThinPlate,
    segment_shape_contact,
)
from .linkage import flattest_segment, solve_position, trace_path

# Bisection tolerances for locating a contact crossing.
_ANGLE_TOL = 1e-9
_TIE_TOL = 1e-12

# Force-model tilt range; the quasi-static model is evaluated with the
# mid-link lean clamped into it (outward lean maps to zero).
_THETA1_MAX = math.radians(40.0)


@dataclass(frozen=True)
class HandConfig:
    """Hand-level simulation parameters."""

    finger: FingerParams = field(default_factory=FingerParams)
    span: float = 200.0
    step: float = 0.002
    symmetric: bool = True
    distal_length: float = 50.0
    bd_arm: tuple[float, float] = (120.0, 175.0)
    min_x_travel_units: float = 5.18
    window_samples: int = 3601
    theta2_max: float = math.pi / 2.0
    record_trajectory: bool = False

    def __post_init__(self):
        if not 0.0 <= self.span <= 200.0:
            raise ValueError("span must lie in [0, 200] mm")
        if not 0.0 < self.step <= 0.01:
            raise ValueError("crank step must lie in (0, 0.01] rad")
        if not 0.0 < self.bd_arm[0] < self.bd_arm[1] <= self.finger.l1:
            raise ValueError("bd_arm must satisfy 0 < a0 < a1 <= l1")
        if self.distal_length <= 0.0:
            raise ValueError("distal_length must be positive")


@dataclass(frozen=True)
class Contact:
    finger: str  # "right" | "left"
    link: str  # "mid" | "distal"
    point: Point2  # hand frame
    force: float  # N


@dataclass(frozen=True)
class TrajectorySample:
    theta_A: float
    finger: str
    D: Point2  # hand frame
    lean: float  # mid-link tilt from vertical, inward positive
    theta2: float


@dataclass(frozen=True)
class GraspOutcome:
    mode: GraspMode
    contacts: tuple[Contact, ...]
    final_states: dict[str, FingerState]
    crank_angle_at_stop: float
    transition_crank_angle: float | None = None
    trajectory: tuple[TrajectorySample, ...] | None = None


def default_object(kind: str, dim: float, dims_l: float = 30.0,
                   pose: tuple[float, float] | None = None,
                   second_dim: float | None = None) -> ObjectShape:
    """Object with the toolkit's default engagement pose.

    Circles and boxes are presented with their far edge at depth 178*l/30,
    thin plates centered in the distal zone at depth 172*l/30. An explicit
    pose overrides the default.
    """
    scale = dims_l / 30.0
    far_edge = 178.0 * scale
    if kind == "circle":
        center = Point2(*pose) if pose else Point2(0.0, far_edge - dim / 2.0)
        return Circle(center=center, diameter=dim)
    if kind == "plate":
        width = second_dim if second_dim is not None else 30.0 * scale
        center = Point2(*pose) if pose else Point2(0.0, 172.0 * scale)
        return ThinPlate(center=center, width=width, thickness=dim)
    if kind == "box":
        height = second_dim if second_dim is not None else dim
        center = Point2(*pose) if pose else Point2(0.0, far_edge - height / 2.0)
        return Box(center=center, width=dim, height=height)
    raise ValueError(f"unknown object kind {kind!r}")


def _shape_to_local(shape: ObjectShape, sign: float, offset: float) -> ObjectShape:
    """Map a hand-frame shape into a finger's canonical local frame
    (x_local = sign*x_hand - offset). Shapes are x-symmetric, so mirroring
    only moves the center."""
    c = shape.center
    local = Point2(sign * c.x - offset, c.y)
    return replace(shape, center=local)


def _local_to_hand(p: Point2, sign: float, offset: float) -> Point2:
    return Point2(sign * (p.x + offset), p.y)


def _lean(B: Point2, D: Point2) -> float:
    # Inward (toward -x in the local frame) tilt of the mid link.
    return math.atan2(-(D.x - B.x), D.y - B.y)


def _mid_segment(cfg: HandConfig, B: Point2, D: Point2) -> Segment2:
    u = D - B
    n = u.norm()
    a0, a1 = cfg.bd_arm
    return Segment2(
        Point2(B.x + u.x * a0 / n, B.y + u.y * a0 / n),
        Point2(B.x + u.x * a1 / n, B.y + u.y * a1 / n),
    )


def _distal_segment(cfg: HandConfig, D: Point2, theta2: float) -> Segment2:
    d = Point2(-math.sin(theta2), math.cos(theta2))
    return Segment2(D, Point2(D.x + d.x * cfg.distal_length,
                              D.y + d.y * cfg.distal_length))


def _bisect_crossing(f: Callable[[float], float], lo: float, hi: float) -> float:
    """First angle in (lo, hi] where f crosses from positive to <= 0."""
    while hi - lo > _ANGLE_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _object_half_width(shape: ObjectShape) -> float:
    if isinstance(shape, Circle):
        return abs(shape.center.x) + shape.radius
    if isinstance(shape, Box):
        return abs(shape.center.x) + shape.width / 2.0
    return abs(shape.center.x) + shape.thickness / 2.0


@dataclass
class _FingerRun:
    name: str
    sign: float
    shape: ObjectShape  # in this finger's local frame
    active: bool = True
    mode: GraspMode | None = None
    stop_angle: float | None = None
    lean_at_stop: float = 0.0
    theta2_final: float = 0.0
    mid_contact: Point2 | None = None  # local frame
    distal_contact: Point2 | None = None
    mid_contact_angle: float | None = None
    prev: dict[str, float] = field(default_factory=dict)


def _surface_distance(cfg: HandConfig, run: _FingerRun, theta_A: float,
                      link: str, theta2: float = 0.0) -> float:
    B, D = solve_position(cfg.finger.hoecken, theta_A)
    if link == "mid":
        seg = _mid_segment(cfg, B, D)
    else:
        seg = _distal_segment(cfg, D, theta2)
    d, _ = segment_shape_contact(seg, run.shape)
    return d


def _stopper_limited_theta2(p: FingerParams, theta1: float, cap: float) -> float:
    """Largest distal rotation the differential admits before full opening,
    capped at the requested maximum."""
    from .errors import NoSolution
    from .finger import virtual_AB_length

    limit = p.AH + p.BH

    def bar(theta2: float) -> float:
        # The bar diverges toward the ray/line parallelism at
        # theta1 + theta2 = pi/2, so treat that as past the stopper.
        try:
            return virtual_AB_length(p, theta1, theta2)
        except NoSolution:
            return math.inf

    lo, hi = 0.0, cap
    if bar(cap) < limit:
        return cap
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if bar(mid) < limit:
            lo = mid
        else:
            hi = mid
    # Back off enough for the sensitivity stencil around the final pose.
    return max(lo - 1e-4, 0.0)


def _wrap_distal(cfg: HandConfig, run: _FingerRun, theta_Ac: float) -> None:
    """Rotate the distal link inward about the frozen carrier point until it
    meets the object or the rotation cap."""
    p = cfg.finger
    theta1_model = min(max(run.lean_at_stop, 0.0), _THETA1_MAX)
    cap = _stopper_limited_theta2(p, theta1_model, cfg.theta2_max)
    _, D = solve_position(p.hoecken, theta_Ac)

    def dist(theta2: float) -> float:
        d, _ = segment_shape_contact(_distal_segment(cfg, D, theta2), run.shape)
        return d

    n_steps = max(1, int(math.ceil(cap / cfg.step)))
    prev_t, prev_d = 0.0, dist(0.0)
    theta2_final = cap
    contacted = False
    for i in range(1, n_steps + 1):
        t = min(cap, i * cfg.step)
        d = dist(t)
        if prev_d > 0.0 >= d:
            theta2_final = _bisect_crossing(dist, prev_t, t)
            contacted = True
            break
        prev_t, prev_d = t, d
    run.theta2_final = theta2_final
    if contacted:
        _, point = segment_shape_contact(
            _distal_segment(cfg, D, theta2_final), run.shape)
        run.distal_contact = point


def _resolve_contact(cfg: HandConfig, run: _FingerRun, theta_c: float,
                     link: str) -> None:
    """Freeze a finger at its first contact and classify the outcome."""
    p = cfg.finger
    B, D = solve_position(p.hoecken, theta_c)
    run.active = False
    run.stop_angle = theta_c
    run.lean_at_stop = _lean(B, D)
    theta1_model = min(max(run.lean_at_stop, 0.0), _THETA1_MAX)
    if link == "distal":
        run.mode = GraspMode.PINCH
        _, point = segment_shape_contact(_distal_segment(cfg, D, 0.0), run.shape)
        run.distal_contact = point
        return
    run.mid_contact_angle = theta_c
    _, point = segment_shape_contact(_mid_segment(cfg, B, D), run.shape)
    run.mid_contact = point
    _wrap_distal(cfg, run, theta_c)
    # The differential opens only if the spring can overcome the stopper
    # preload somewhere along the wrap; torque grows with theta2, so the
    # final pose carries the maximum.
    from .spring import spring_torque

    try:
        tau_max = spring_torque(p, theta1_model, run.theta2_final)
    except StopperLimit:
        tau_max = math.inf
    if tau_max > p.preload:
        run.mode = GraspMode.ENVELOPE
    else:
        # Stopper never yields: the hand stays a parallel-pinch device,
        # statically pressing the mid link on the object.
        run.mode = GraspMode.PINCH
        run.theta2_final = 0.0
        run.distal_contact = None


def close_on_object(cfg: HandConfig, obj: ObjectShape) -> GraspOutcome:
    """Deterministic quasi-static closure of both fingers on an object."""
    p = cfg.finger
    dims = p.hoecken
    if _object_half_width(obj) > cfg.span / 2.0:
        raise InvalidObject("object does not fit laterally within the span")

    trace = trace_path(dims, 0.0, 2.0 * math.pi, cfg.window_samples)
    (w0, w1), _, _ = flattest_segment(
        trace, cfg.min_x_travel_units * dims.l)
    _, D0 = solve_position(dims, w0)
    offset = cfg.span / 2.0 - D0.x

    runs = [
        _FingerRun(name="right", sign=1.0, shape=_shape_to_local(obj, 1.0, offset)),
        _FingerRun(name="left", sign=-1.0, shape=_shape_to_local(obj, -1.0, offset)),
    ]

    for run in runs:
        for link in ("mid", "distal"):
            d = _surface_distance(cfg, run, w0, link)
            if d <= 0.0:
                raise InvalidObject(
                    f"object overlaps the {run.name} finger {link} link at "
                    f"the start pose (clearance {d:.3f} mm)")
            run.prev[link] = d

    trajectory: list[TrajectorySample] = []
    n_steps = int(math.ceil((w1 - w0) / cfg.step))
    prev_theta = w0
    for i in range(1, n_steps + 1):
        theta = min(w1, w0 + i * cfg.step)
        for run in runs:
            if not run.active:
                continue
            crossings = []
            for link in ("mid", "distal"):
                d = _surface_distance(cfg, run, theta, link)
                if run.prev[link] > 0.0 >= d:
                    theta_c = _bisect_crossing(
                        lambda t, _l=link: _surface_distance(cfg, run, t, _l),
                        prev_theta, theta)
                    crossings.append((theta_c, link))
                run.prev[link] = d
            if crossings:
                crossings.sort(key=lambda c: (c[0], c[1] != "mid"))
                theta_c, link = crossings[0]
                if (len(crossings) == 2
                        and abs(crossings[1][0] - crossings[0][0]) <= _TIE_TOL):
                    link = "mid"  # simultaneous touch engages the differential
                _resolve_contact(cfg, run, theta_c, link)
            elif cfg.record_trajectory:
                B, D = solve_position(dims, theta)
                trajectory.append(TrajectorySample(
                    theta_A=theta, finger=run.name,
                    D=_local_to_hand(D, run.sign, offset),
                    lean=_lean(B, D), theta2=0.0))
        if all(not run.active for run in runs):
            break
        prev_theta = theta

    for run in runs:
        if run.active:
            run.active = False
            run.stop_angle = w1
            B, D = solve_position(dims, w1)
            run.lean_at_stop = _lean(B, D)

    return _assemble_outcome(cfg, runs, offset,
                             tuple(trajectory) if cfg.record_trajectory else None)


def _assemble_outcome(cfg: HandConfig, runs: list[_FingerRun], offset: float,
                      trajectory) -> GraspOutcome:
    from .forces import envelope_forces, pinch_force_chain

    p = cfg.finger
    contacts: list[Contact] = []
    final_states: dict[str, FingerState] = {}
    transition_angle = None
    any_envelope = False
    any_contact = False

    for run in runs:
        theta1_model = min(max(run.lean_at_stop, 0.0), _THETA1_MAX)
        if run.mode is GraspMode.ENVELOPE:
            any_envelope = True
            any_contact = True
            forces = envelope_forces(p, theta1_model, run.theta2_final)
            _, D = solve_position(p.hoecken, run.stop_angle)
            contacts.append(Contact(
                finger=run.name, link="mid",
                point=_local_to_hand(run.mid_contact, run.sign, offset),
                force=forces.F2))
            if run.distal_contact is not None:
                contacts.append(Contact(
                    finger=run.name, link="distal",
                    point=_local_to_hand(run.distal_contact, run.sign, offset),
                    force=forces.F3))
            final_states[run.name] = FingerState(
                theta1=theta1_model, theta2=run.theta2_final,
                mode=GraspMode.ENVELOPE)
            if transition_angle is None or run.mid_contact_angle < transition_angle:
                transition_angle = run.mid_contact_angle
        elif run.mode is GraspMode.PINCH:
            any_contact = True
            if run.distal_contact is not None:
                point = run.distal_contact
                _, D = solve_position(p.hoecken, run.stop_angle)
                arm = point.distance_to(D)
                force = pinch_force_chain(p, run.stop_angle, theta1_model, arm)
                contacts.append(Contact(
                    finger=run.name, link="distal",
                    point=_local_to_hand(point, run.sign, offset), force=force))
            else:
                # Blocked mid link with an unyielding stopper: static press.
                B, D = solve_position(p.hoecken, run.stop_angle)
                point = run.mid_contact
                lever = point.y - B.y
                force = pinch_force_chain(
                    p, run.stop_angle, theta1_model,
                    max(lever - p.l1 * math.cos(theta1_model), 0.0))
                contacts.append(Contact(
                    finger=run.name, link="mid",
                    point=_local_to_hand(point, run.sign, offset), force=force))
            final_states[run.name] = FingerState(
                theta1=theta1_model, theta2=0.0, mode=GraspMode.PINCH)
        else:
            final_states[run.name] = FingerState(
                theta1=theta1_model, theta2=0.0, mode=GraspMode.PINCH)

    if not any_contact:
        mode = GraspMode.FAILURE
    elif any_envelope:
        mode = GraspMode.ENVELOPE
    else:
        mode = GraspMode.PINCH

    return GraspOutcome(
        mode=mode,
        contacts=tuple(contacts),
        final_states=final_states,
        crank_angle_at_stop=max(run.stop_angle for run in runs),
        transition_crank_angle=transition_angle,
        trajectory=trajectory,
    )


def transition_angle(cfg: HandConfig, obj: ObjectShape) -> float:
    """Crank angle at which the mid link first contacts and the differential
    opens. Raises NotEnveloping when closure does not end in an envelope."""
    outcome = close_on_object(cfg, obj)
    if outcome.mode is not GraspMode.ENVELOPE or outcome.transition_crank_angle is None:
        raise NotEnveloping(f"closure ended in {outcome.mode.value}")
    return outcome.transition_crank_angle


def outcome_to_dict(outcome: GraspOutcome) -> dict:
    """JSON-ready report of a closure."""
    report = {
        "mode": outcome.mode.value,
        "contacts": [
            {
                "finger": c.finger,
                "link": c.link,
                "x_mm": round(c.point.x, 6),
                "y_mm": round(c.point.y, 6),
                "force_N": round(c.force, 6),
            }
            for c in outcome.contacts
        ],
        "final_states": {
            name: {
                "theta1_deg": round(math.degrees(st.theta1), 6),
                "theta2_deg": round(math.degrees(st.theta2), 6),
                "mode": st.mode.value,
            }
            for name, st in sorted(outcome.final_states.items())
        },
        "crank_angle_at_stop_deg": round(
            math.degrees(outcome.crank_angle_at_stop), 6),
    }
    if outcome.transition_crank_angle is not None:
        report["transition_crank_angle_deg"] = round(
            math.degrees(outcome.transition_crank_angle), 6)
    return report


def trajectory_csv_rows(outcome: GraspOutcome) -> Iterable[str]:
    yield "theta_deg,finger,Dx_mm,Dy_mm,lean_deg,theta2_deg"
    for s in outcome.trajectory or ():
        yield (f"{math.degrees(s.theta_A):.6f},{s.finger},{s.D.x:.6f},"
               f"{s.D.y:.6f},{math.degrees(s.lean):.6f},"
               f"{math.degrees(s.theta2):.6f}")
