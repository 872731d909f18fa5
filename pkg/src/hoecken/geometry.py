"""Minimal 2-D geometry kernel: points, segments, object shapes, distances.

All lengths are millimetres, all angles radians. Every operation rejects
non-finite inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DegenerateTriangle

# Absolute tolerance for boundary clamping in triangle constructions.
TRIANGLE_TOL = 1e-9


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite coordinate: {v!r}")


@dataclass(frozen=True)
class Point2:
    """Point (or free vector) in the plane, mm."""

    x: float
    y: float

    def __post_init__(self):
        _require_finite(self.x, self.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> float:
        return self.x * other.y - self.y * other.x

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Segment2:
    """Directed segment p0 -> p1; zero length rejected."""

    p0: Point2
    p1: Point2

    def __post_init__(self):
        if self.p0.distance_to(self.p1) == 0.0:
            raise ValueError("zero-length segment")

    def point_at(self, t: float) -> Point2:
        return Point2(
            self.p0.x + t * (self.p1.x - self.p0.x),
            self.p0.y + t * (self.p1.y - self.p0.y),
        )

    def length(self) -> float:
        return self.p0.distance_to(self.p1)


def rotate(p: Point2, about: Point2, angle: float) -> Point2:
    """Rigid rotation of p about a pivot, CCW positive."""
    c, s = math.cos(angle), math.sin(angle)
    dx, dy = p.x - about.x, p.y - about.y
    return Point2(about.x + c * dx - s * dy, about.y + s * dx + c * dy)


def triangle_angle(a: float, b: float, c: float) -> float:
    """Angle opposite side c in a triangle with sides a, b, c (law of cosines).

    Sides within TRIANGLE_TOL of the degenerate limits are clamped; beyond
    that DegenerateTriangle is raised. Result lies in [0, pi].
    """
    _require_finite(a, b, c)
    if a <= 0.0 or b <= 0.0:
        raise DegenerateTriangle(f"sides must be positive, got a={a}, b={b}")
    if c > a + b + TRIANGLE_TOL or c < abs(a - b) - TRIANGLE_TOL:
        raise DegenerateTriangle(
            f"triangle inequality violated: a={a}, b={b}, c={c}"
        )
    cos_val = (a * a + b * b - c * c) / (2.0 * a * b)
    cos_val = min(1.0, max(-1.0, cos_val))
    return math.acos(cos_val)


# ---------------------------------------------------------------------------
# Object shapes


@dataclass(frozen=True)
class Circle:
    center: Point2
    diameter: float

    def __post_init__(self):
        _require_finite(self.diameter)
        if self.diameter <= 0.0:
            raise ValueError("circle diameter must be positive")

    @property
    def radius(self) -> float:
        return self.diameter / 2.0


@dataclass(frozen=True)
class Box:
    center: Point2
    width: float
    height: float

    def __post_init__(self):
        _require_finite(self.width, self.height)
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("box dimensions must be positive")


@dataclass(frozen=True)
class ThinPlate:
    """Thin sheet standing in the grasp plane: thickness laterally (x),
    width along the finger axis (y). Thickness capped at 5 mm."""

    center: Point2
    width: float
    thickness: float

    def __post_init__(self):
        _require_finite(self.width, self.thickness)
        if self.width <= 0.0 or self.thickness <= 0.0:
            raise ValueError("plate dimensions must be positive")
        if self.thickness > 5.0:
            raise ValueError("plate thickness must be <= 5 mm")


ObjectShape = Union[Circle, Box, ThinPlate]


def _project_on_segment(p: Point2, s: Segment2) -> float:
    d = s.p1 - s.p0
    t = (p - s.p0).dot(d) / d.dot(d)
    return min(1.0, max(0.0, t))


def _point_segment_distance(p: Point2, s: Segment2) -> float:
    return p.distance_to(s.point_at(_project_on_segment(p, s)))


def _segment_segment_closest(s1: Segment2, s2: Segment2) -> tuple[float, float]:
    """(distance, parameter on s1 of the closest point)."""
    d1 = s1.p1 - s1.p0
    d2 = s2.p1 - s2.p0
    denom = d1.cross(d2)
    if abs(denom) > 1e-15:
        w = s2.p0 - s1.p0
        t1 = w.cross(d2) / denom
        t2 = w.cross(d1) / denom
        if 0.0 <= t1 <= 1.0 and 0.0 <= t2 <= 1.0:
            return 0.0, t1
    candidates = [
        (_point_segment_distance(s1.p0, s2), 0.0),
        (_point_segment_distance(s1.p1, s2), 1.0),
    ]
    for q in (s2.p0, s2.p1):
        t = _project_on_segment(q, s1)
        candidates.append((q.distance_to(s1.point_at(t)), t))
    return min(candidates, key=lambda c: c[0])


def _box_half_extents(shape: Union[Box, ThinPlate]) -> tuple[Point2, float, float]:
    if isinstance(shape, Box):
        return shape.center, shape.width / 2.0, shape.height / 2.0
    return shape.center, shape.thickness / 2.0, shape.width / 2.0


def _segment_box_contact(seg: Segment2, center: Point2, hx: float,
                         hy: float) -> tuple[float, float]:
    """(signed distance, parameter on seg of the closest/deepest point)."""
    # Clip the segment against the box slabs to find any interior overlap.
    p, q = seg.p0 - center, seg.p1 - center
    dx, dy = q.x - p.x, q.y - p.y
    t0, t1 = 0.0, 1.0
    for origin, delta, h in ((p.x, dx, hx), (p.y, dy, hy)):
        if abs(delta) < 1e-15:
            if abs(origin) > h:
                t0, t1 = 1.0, 0.0
                break
        else:
            ta = (-h - origin) / delta
            tb = (h - origin) / delta
            if ta > tb:
                ta, tb = tb, ta
            t0, t1 = max(t0, ta), min(t1, tb)
    if t0 < t1:
        # Interior overlap: deepest penetration of the clipped sub-segment.
        # Depth along the segment is a min of four linear functions of t
        # (concave piecewise-linear); its max sits at an endpoint or at a
        # crossing of two of the linear pieces.
        def depth(t: float) -> float:
            x = p.x + t * dx
            y = p.y + t * dy
            return min(hx - x, hx + x, hy - y, hy + y)

        candidates = [t0, t1]
        coeffs = [(-dx, hx - p.x), (dx, hx + p.x), (-dy, hy - p.y), (dy, hy + p.y)]
        for i in range(4):
            for j in range(i + 1, 4):
                da = coeffs[i][0] - coeffs[j][0]
                if abs(da) > 1e-15:
                    t = (coeffs[j][1] - coeffs[i][1]) / da
                    if t0 < t < t1:
                        candidates.append(t)
        best_t = max(candidates, key=depth)
        return -max(depth(best_t), 0.0), best_t
    corners = [
        Point2(center.x - hx, center.y - hy),
        Point2(center.x + hx, center.y - hy),
        Point2(center.x + hx, center.y + hy),
        Point2(center.x - hx, center.y + hy),
    ]
    edges = [Segment2(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    return min((_segment_segment_closest(seg, e) for e in edges),
               key=lambda c: c[0])


def segment_shape_contact(seg: Segment2, shape: ObjectShape) -> tuple[float, Point2]:
    """Signed clearance plus the segment point realising it.

    Positive distance: minimum separation, point of closest approach.
    Negative: the segment penetrates the interior; magnitude is the deepest
    penetration and the point is the deepest segment point.
    """
    if isinstance(shape, Circle):
        t = _project_on_segment(shape.center, seg)
        point = seg.point_at(t)
        return point.distance_to(shape.center) - shape.radius, point
    if isinstance(shape, (Box, ThinPlate)):
        center, hx, hy = _box_half_extents(shape)
        d, t = _segment_box_contact(seg, center, hx, hy)
        return d, seg.point_at(t)
    raise TypeError(f"unsupported shape: {shape!r}")


def segment_shape_distance(seg: Segment2, shape: ObjectShape) -> float:
    """Signed clearance between a segment and a shape boundary.

    Positive: minimum separation. Zero: touching. Negative: the segment
    penetrates the interior; the magnitude is the deepest penetration.
    """
    return segment_shape_contact(seg, shape)[0]
