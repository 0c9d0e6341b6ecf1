"""Argument-principle zero counting on axis-aligned rectangles.

The change of ``arg f`` along a segment is accumulated from wrapped phase
increments between adaptively chosen samples.  An interval is accepted when
its wrapped increment is below ``pi/2`` and agrees with the trapezoidal
estimate of ``Im int f'/f dz`` to within ``pi/4``; both quantities come out of
the same scaled evaluation, so the second test costs nothing and rejects
intervals where the image curve loops around the origin between samples.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core import ExpSum, dominant_exponents, eval_scaled, scaled_frame
from .errors import (InvalidRadius, NoConvergence, PerturbationExhausted,
                     ZeroAtAnchor, ZeroOnPath)

ZERO_TOL = 1e-12
LOG_ZERO_TOL = math.log(ZERO_TOL)
MAX_POINTS = 2**26
PHASE_STEP = math.pi / 2
TRAPEZOID_TOL = math.pi / 4
INTEGRALITY_TOL = 1e-6
MAX_PERTURBATIONS = 32
CIRCLE_POINTS = 4096


@dataclass(frozen=True)
class Rectangle:
    """Closed rectangle traversed bottom, right, top, left (positive orientation)."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def corners(self):
        return (complex(self.x_lo, self.y_lo), complex(self.x_hi, self.y_lo),
                complex(self.x_hi, self.y_hi), complex(self.x_lo, self.y_hi))

    def edges(self):
        c = self.corners
        return [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> float:
        return self.y_hi - self.y_lo

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return (self.x_lo - tol <= z.real <= self.x_hi + tol
                and self.y_lo - tol <= z.imag <= self.y_hi + tol)


@dataclass(frozen=True)
class WindingResult:
    count: int
    min_boundary_logmod: float
    perturbations_applied: int
    segments_evaluated: int
    rectangle: Rectangle | None = None


@dataclass(frozen=True)
class BacklundBound:
    segment: tuple[complex, complex]
    R: float
    T: float
    bound: float
    lhs: float
    max_logmod: float = math.nan
    anchor_logmod: float = math.nan

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound + 1e-9


@dataclass
class _PhaseTrace:
    total: float
    points: int
    min_rel_logmod: float


def _sample(f: ExpSum, a: complex, d: complex, t: np.ndarray):
    z = a + d * t
    emax, _, s, sw = scaled_frame(f, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.log(np.abs(s))
        g = sw / s
    return z, s, g, rel


def _trace(f: ExpSum, a: complex, b: complex, refine: int = 0) -> _PhaseTrace:
    a, b = complex(a), complex(b)
    d = b - a
    length = abs(d)
    if length == 0:
        return _PhaseTrace(0.0, 1, float(eval_scaled(f, a).logmod - dominant_exponents(f, a.real).max()))
    spread = float(f.freqs[-1] - f.freqs[0])
    n0 = int(min(max(8, math.ceil(length * spread / (math.pi / 4))), MAX_POINTS // 4))
    n0 <<= refine
    t = np.linspace(0.0, 1.0, n0 + 1)
    z, s, g, rel = _sample(f, a, d, t)

    def check(rel, z):
        bad = ~(rel >= LOG_ZERO_TOL)
        if bad.any():
            i = int(np.argmax(bad))
            raise ZeroOnPath(complex(z[i]), a, b)

    check(rel, z)
    while True:
        inc = np.angle(s[1:] * np.conj(s[:-1]))
        trap = ((g[1:] + g[:-1]) * 0.5 * d * np.diff(t)).imag
        bad = (np.abs(inc) >= PHASE_STEP) | (np.abs(inc - trap) > TRAPEZOID_TOL)
        if not bad.any():
            break
        idx = np.flatnonzero(bad)
        if t.size + idx.size > MAX_POINTS:
            raise NoConvergence(f"phase tracking on [{a}, {b}] exceeded {MAX_POINTS} points")
        tm = 0.5 * (t[idx] + t[idx + 1])
        zm, sm, gm, relm = _sample(f, a, d, tm)
        check(relm, zm)
        t = np.insert(t, idx + 1, tm)
        s = np.insert(s, idx + 1, sm)
        g = np.insert(g, idx + 1, gm)
        rel = np.insert(rel, idx + 1, relm)
    return _PhaseTrace(float(np.sum(inc)), int(t.size), float(rel.min()))


def phase_change(f: ExpSum, a: complex, b: complex) -> float:
    """Continuous change of ``arg f`` along the straight segment ``a -> b``.

    Raises :class:`ZeroOnPath` when ``|f|`` drops below ``1e-12`` times the
    dominant term at a sample, :class:`NoConvergence` past ``2**26`` samples.
    """
    return _trace(f, a, b).total


def _edge_seed(rect: Rectangle, attempt: int) -> int:
    raw = struct.pack("<4dq", rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi, attempt)
    return int.from_bytes(hashlib.sha256(raw).digest()[:8], "little")


def _perturb(rect: Rectangle, edge: int, attempt: int) -> Rectangle:
    """Shift one edge off a zero.

    Bottom and left edges move outward, top and right edges inward, so a
    zero lying on the original boundary is counted iff it is on the bottom or
    left edge.
    """
    u = 1.0 + np.random.default_rng(_edge_seed(rect, attempt)).random()
    if edge in (0, 2):
        coord, side = (rect.y_lo if edge == 0 else rect.y_hi), rect.height
    else:
        coord, side = (rect.x_hi if edge == 1 else rect.x_lo), rect.width
    delta = min(1e-7 * (1.0 + abs(coord)), 0.05 * side) * u
    x_lo, x_hi, y_lo, y_hi = rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi
    if edge == 0:
        y_lo -= delta
    elif edge == 1:
        x_hi -= delta
    elif edge == 2:
        y_hi -= delta
    else:
        x_lo -= delta
    return Rectangle(x_lo, x_hi, y_lo, y_hi)


def _count_once(f: ExpSum, rect: Rectangle, refine: int):
    total, points, low = 0.0, 0, math.inf
    for i, (a, b) in enumerate(rect.edges()):
        try:
            tr = _trace(f, a, b, refine)
        except ZeroOnPath as exc:
            exc.edge = i
            raise
        total += tr.total
        points += tr.points
        low = min(low, tr.min_rel_logmod)
    return total / (2 * math.pi), points, low


def count_zeros(f: ExpSum, R: Rectangle) -> WindingResult:
    """Number of zeros of ``f`` in ``R`` by the argument principle.

    Zeros in the open interior are counted; a zero on the boundary is
    counted iff it lies on the bottom or left edge (corner ``(x_lo, y_lo)``
    included).  Edges that run through a zero are perturbed, at most 32 times.
    """
    rect = R
    perturbations = 0
    evaluated = 0
    while True:
        try:
            for refine in (0, 1):
                turns, points, low = _count_once(f, rect, refine)
                evaluated += points
                count = round(turns)
                if abs(turns - count) <= INTEGRALITY_TOL:
                    break
            else:
                raise NoConvergence(f"winding number {turns} is not an integer")
            return WindingResult(int(count), float(low), perturbations, evaluated, rect)
        except ZeroOnPath as exc:
            if perturbations >= MAX_PERTURBATIONS:
                raise PerturbationExhausted(
                    f"boundary of {R} still meets a zero after {perturbations} perturbations"
                ) from exc
            rect = _perturb(rect, exc.edge, perturbations)
            perturbations += 1


def _circle_max(f: ExpSum, center: complex, R: float) -> float:
    theta = np.linspace(0.0, 2 * math.pi, CIRCLE_POINTS, endpoint=False)

    def logmod(th):
        z = center + R * np.exp(1j * np.asarray(th))
        emax, _, s, _ = scaled_frame(f, z)
        return emax + np.log(np.abs(s))

    vals = logmod(theta)
    i = int(np.argmax(vals))
    step = 2 * math.pi / CIRCLE_POINTS
    res = minimize_scalar(lambda th: -float(logmod(th)),
                          bounds=(theta[i] - step, theta[i] + step), method="bounded",
                          options={"xatol": 1e-12})
    return max(float(vals[i]), -float(res.fun))


def backlund_bound(f: ExpSum, z1: complex, z2: complex, R: float) -> BacklundBound:
    """Both sides of the Backlund inequality for the segment ``[z1, z2]``.

    ``lhs`` is ``|arg f(z2) - arg f(z1)| / (2 pi)`` with the argument followed
    continuously along the segment; ``bound`` is

        (max_{|zeta| <= R} log|f(z1 + zeta)| - log|f(z1)|) / (2 log(R/T)) + 1/2

    with the disc maximum taken on the circle ``|zeta| = R``.
    """
    z1, z2 = complex(z1), complex(z2)
    T = abs(z2 - z1)
    if not (T > 0 and R > T):
        raise InvalidRadius(f"need R > T = |z2 - z1| > 0, got R={R}, T={T}")
    anchor = eval_scaled(f, z1)
    if anchor.logmod - dominant_exponents(f, z1.real).max() < LOG_ZERO_TOL:
        raise ZeroAtAnchor(f"f(z1) vanishes numerically at {z1}")
    big = _circle_max(f, z1, R)
    bound = (big - anchor.logmod) / (2 * math.log(R / T)) + 0.5
    lhs = abs(phase_change(f, z1, z2)) / (2 * math.pi)
    return BacklundBound((z1, z2), float(R), T, float(bound), lhs, big, anchor.logmod)


REGION_MARGIN = 1.0


def _midline(region, toward: float) -> float:
    if math.isinf(region.x_lo):
        return region.x_hi - REGION_MARGIN
    if math.isinf(region.x_hi):
        return region.x_lo + REGION_MARGIN
    return 0.5 * (region.x_lo + region.x_hi)


def strip_rectangle(decomposition, index: int, y_lo: float, y_hi: float) -> Rectangle:
    """Counting contour for critical strip ``index``.

    The vertical sides run along the middle of the two flanking zero-free
    regions (``REGION_MARGIN`` inside the unbounded outer regions), so zeros
    on the strip's own boundary lines are strictly inside the contour.
    """
    left = decomposition.regions[index]
    right = decomposition.regions[index + 1]
    return Rectangle(_midline(left, -1), _midline(right, 1), y_lo, y_hi)


def spanning_rectangle(decomposition, y_lo: float, y_hi: float) -> Rectangle:
    """Counting contour enclosing every critical strip."""
    return Rectangle(_midline(decomposition.regions[0], -1),
                     _midline(decomposition.regions[-1], 1), y_lo, y_hi)
