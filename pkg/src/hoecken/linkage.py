"""Position analysis of the modified Hoecken stage and its straightness metrics.

The stage is a crank AB (length l) about fixed pivot A, a fixed slider
point C above A, and a coupler of length l_BD threaded from B through C to
the fingertip carrier D. Over part of the crank cycle D traces a nearly
horizontal line.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InsufficientTravel
from .geometry import Point2

TWO_PI = 2.0 * math.pi

# Central-difference step for the drive Jacobian, chosen to balance
# truncation against roundoff for mm-scale geometry.
FD_STEP = 1e-6


@dataclass(frozen=True)
class HoeckenDims:
    """Link lengths and fixed-pivot layout of the crank/slider/coupler stage."""

    l: float = 30.0
    l_AC: float = 45.0
    l_BD: float = 180.0
    A: Point2 = field(default_factory=lambda: Point2(0.0, 0.0))
    C: Point2 | None = None

    def __post_init__(self):
        if self.l <= 0.0:
            raise ValueError("crank length l must be positive")
        if self.l_AC <= self.l:
            raise ValueError("l_AC must exceed l (slider out of crank reach)")
        if self.l_BD <= self.l_AC + self.l:
            raise ValueError("l_BD must exceed l_AC + l (D beyond the slider)")
        if self.C is None:
            object.__setattr__(self, "C", Point2(self.A.x, self.A.y + self.l_AC))
        elif abs(self.C.distance_to(self.A) - self.l_AC) > 1e-9:
            raise ValueError("|C - A| must equal l_AC")

    @classmethod
    def from_ratios(cls, l: float, lac_ratio: float = 1.5, lbd_ratio: float = 6.0,
                    A: Point2 | None = None) -> "HoeckenDims":
        return cls(l=l, l_AC=lac_ratio * l, l_BD=lbd_ratio * l,
                   A=A if A is not None else Point2(0.0, 0.0))


@dataclass(frozen=True)
class PathTrace:
    """Sampled coupler-point path: ordered (theta_A, D) pairs."""

    samples: tuple[tuple[float, Point2], ...]
    dims: HoeckenDims

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("trace needs at least 2 samples")
        thetas = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError("theta_A must be strictly increasing")


def solve_position(dims: HoeckenDims, theta_A: float) -> tuple[Point2, Point2]:
    """Crank pin B and coupler point D at crank angle theta_A.

    B = A + l*(cos, sin); D lies on the ray from B through C, l_BD from B
    (past C, which l_BD > l_AC + l guarantees).
    """
    B = Point2(dims.A.x + dims.l * math.cos(theta_A),
               dims.A.y + dims.l * math.sin(theta_A))
    w = dims.C - B
    n = w.norm()
    D = Point2(B.x + dims.l_BD * w.x / n, B.y + dims.l_BD * w.y / n)
    return B, D


def trace_path(dims: HoeckenDims, theta_start: float, theta_end: float,
               n: int) -> PathTrace:
    """Uniform n-sample trace of D over [theta_start, theta_end], inclusive."""
    if theta_start >= theta_end:
        raise ValueError("theta_start must be < theta_end")
    if n < 2:
        raise ValueError("need at least 2 samples")
    step = (theta_end - theta_start) / (n - 1)
    samples = []
    for i in range(n):
        theta = theta_start + i * step
        _, D = solve_position(dims, theta)
        samples.append((theta, D))
    return PathTrace(samples=tuple(samples), dims=dims)


def _scan_windows(thetas: Sequence[float], xs: Sequence[float],
                  ys: Sequence[float], n_starts: int, max_len: int,
                  min_x_travel: float):
    """Two-pointer scan for the window of minimal y-band whose x extent
    reaches min_x_travel. Monotone deques give O(n); ties keep the first
    (smallest start index) window."""
    qxmax: deque[int] = deque()
    qxmin: deque[int] = deque()
    qymax: deque[int] = deque()
    qymin: deque[int] = deque()
    best = None
    j = 0
    total = len(thetas)
    for i in range(n_starts):
        for q in (qxmax, qxmin, qymax, qymin):
            while q and q[0] < i:
                q.popleft()
        if j < i:
            j = i
        while j < min(i + max_len, total):
            if qxmax and qxmin and xs[qxmax[0]] - xs[qxmin[0]] >= min_x_travel and j > i:
                break
            while qxmax and xs[j] >= xs[qxmax[-1]]:
                qxmax.pop()
            qxmax.append(j)
            while qxmin and xs[j] <= xs[qxmin[-1]]:
                qxmin.pop()
            qxmin.append(j)
            while qymax and ys[j] >= ys[qymax[-1]]:
                qymax.pop()
            qymax.append(j)
            while qymin and ys[j] <= ys[qymin[-1]]:
                qymin.pop()
            qymin.append(j)
            j += 1
        if qxmax and qxmin and xs[qxmax[0]] - xs[qxmin[0]] >= min_x_travel:
            band = ys[qymax[0]] - ys[qymin[0]]
            travel = xs[qxmax[0]] - xs[qxmin[0]]
            if best is None or band < best[0]:
                best = (band, travel, i, j - 1)
    return best


def flattest_segment(trace: PathTrace,
                     min_x_travel: float) -> tuple[tuple[float, float], float, float]:
    """Contiguous crank interval of minimal vertical band among windows with
    horizontal D-travel >= min_x_travel.

    Returns ((theta_a, theta_b), max_dev, x_travel). A full-revolution trace
    is treated as periodic, so the interval may wrap (theta_b > theta_start
    + 2*pi is normalised into the trace's own range plus one period).
    Raises InsufficientTravel when no window reaches the requested travel.
    """
    thetas = [s[0] for s in trace.samples]
    xs = [s[1].x for s in trace.samples]
    ys = [s[1].y for s in trace.samples]
    if min_x_travel <= 0.0:
        return ((thetas[0], thetas[0]), 0.0, 0.0)

    span = thetas[-1] - thetas[0]
    step = span / (len(thetas) - 1)
    periodic = abs(span - TWO_PI) <= 2.0 * step
    if periodic:
        # Drop the duplicated end sample if present, then append one period.
        base = len(thetas) - 1 if span >= TWO_PI - 1e-12 else len(thetas)
        ext_t = thetas[:base] + [t + TWO_PI for t in thetas[:base]]
        ext_x = xs[:base] + xs[:base]
        ext_y = ys[:base] + ys[:base]
        best = _scan_windows(ext_t, ext_x, ext_y, base, base, min_x_travel)
        if best is None:
            raise InsufficientTravel(
                f"no crank window achieves x-travel {min_x_travel}")
        band, travel, i, jj = best
        return ((ext_t[i], ext_t[jj]), band, travel)

    best = _scan_windows(thetas, xs, ys, len(thetas), len(thetas), min_x_travel)
    if best is None:
        raise InsufficientTravel(
            f"no crank window achieves x-travel {min_x_travel}")
    band, travel, i, jj = best
    return ((thetas[i], thetas[jj]), band, travel)


def dxD_dthetaA(dims: HoeckenDims, theta_A: float) -> float:
    """Drive Jacobian dx_D/dtheta_A by central finite difference.

    Positive when D moves toward +x for increasing theta_A.
    """
    _, d_plus = solve_position(dims, theta_A + FD_STEP)
    _, d_minus = solve_position(dims, theta_A - FD_STEP)
    return (d_plus.x - d_minus.x) / (2.0 * FD_STEP)


def trace_to_csv_rows(trace: PathTrace) -> Iterable[str]:
    """CSV rows (header first) for a trace: theta_deg, Bx, By, Dx, Dy in mm."""
    yield "theta_deg,Bx_mm,By_mm,Dx_mm,Dy_mm"
    for theta, D in trace.samples:
        B, _ = solve_position(trace.dims, theta)
        yield (f"{math.degrees(theta):.6f},{B.x:.6f},{B.y:.6f},"
               f"{D.x:.6f},{D.y:.6f}")
