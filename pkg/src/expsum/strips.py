"""Zero-free regions, boundary lines and critical strips.

Term ``k`` dominates at abscissa ``x`` when its modulus exceeds the sum of
the moduli of all other terms.  In log form this is the sign of the margin

    m_k(x) = (w_k x + log|H_k|) - log sum_{j != k} |H_j| e^{w_j x},

a linear function minus a log-sum-exp of linear functions.  ``m_k`` is
therefore concave, so each term dominates on at most one open interval and
the interval ends are the two roots of ``m_k`` around its maximiser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .core import ExpSum, as_normalized, dominant_exponents

BISECTION_TOL = 1e-12
MIN_REGION_WIDTH = 1e-10


@dataclass(frozen=True)
class ZeroFreeRegion:
    x_lo: float
    x_hi: float
    dominant: int

    def contains(self, x: float) -> bool:
        return self.x_lo < x < self.x_hi


@dataclass(frozen=True)
class CriticalStrip:
    x_lo: float
    x_hi: float
    left_dominant: int
    right_dominant: int

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.x_lo - tol <= x <= self.x_hi + tol


@dataclass(frozen=True)
class StripDecomposition:
    regions: tuple[ZeroFreeRegion, ...]
    strips: tuple[CriticalStrip, ...]

    @property
    def boundary_count(self) -> int:
        return 2 * len(self.strips)

    def strip_of(self, x: float, tol: float = 1e-9) -> Optional[int]:
        """Index of the leftmost closed strip containing ``x`` (within ``tol``)."""
        for i, s in enumerate(self.strips):
            if s.contains(x, tol):
                return i
        return None

    def nearest_strip(self, x: float) -> int:
        dist = [max(s.x_lo - x, x - s.x_hi, 0.0) for s in self.strips]
        return int(np.argmin(dist))

    @property
    def span(self) -> tuple[float, float]:
        return self.strips[0].x_lo, self.strips[-1].x_hi


def dominance_margin(f: ExpSum, k: int, x):
    """``m_k(x)``; positive exactly where term ``k`` strictly dominates."""
    if not 0 <= k < len(f):
        raise IndexError(k)
    if np.ndim(x) == 0:
        # scalar path: plain floats are far cheaper than the array machinery here
        ex = [w * float(x) + la for w, la in zip(f._freq_list, f._log_abs_list)]
        mine = ex.pop(k)
        top = max(ex)
        return mine - top - math.log(math.fsum(math.exp(e - top) for e in ex))
    ex = dominant_exponents(f, x)
    others = np.delete(ex, k, axis=0)
    m = ex[k] - logsumexp(others, axis=0)
    return float(m) if np.ndim(m) == 0 else m


def _margin_slope(f: ExpSum, k: int, x: float) -> float:
    # m_k'(x) = w_k - softmax-weighted mean of the other frequencies; decreasing in x
    x = float(x)
    ws = f._freq_list
    ex = [w * x + la for w, la in zip(ws, f._log_abs_list)]
    del ex[k]
    others = ws[:k] + ws[k + 1:]
    top = max(ex)
    p = [math.exp(e - top) for e in ex]
    return ws[k] - math.fsum(pi * wi for pi, wi in zip(p, others)) / math.fsum(p)


def search_bounds(f: ExpSum) -> tuple[float, float]:
    """Abscissas outside which the lowest / highest term provably dominates."""
    m = len(f)
    w, la = f.freqs - f.freqs[0], f.log_abs
    lo = min((la[0] - math.log(m) - la[j]) / w[j] for j in range(1, m))
    hi = max((math.log(m) + la[j] - la[-1]) / (w[-1] - w[j]) for j in range(m - 1))
    return lo - 1.0, hi + 1.0


def _bisect(fun, a: float, b: float, tol: float = BISECTION_TOL) -> float:
    """Root of ``fun`` on ``[a, b]`` given a sign change; returns the midpoint of the final bracket."""
    fa = fun(a)
    a, b = float(a), float(b)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = fun(mid)
        if fm == 0.0:
            return float(mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return float(0.5 * (a + b))


def _margin_root(f: ExpSum, k: int, a: float, b: float) -> float:
    """Boundary of term ``k``'s dominance in ``[a, b]``: bisection, then Newton polish."""
    x = _bisect(lambda t: dominance_margin(f, k, t), a, b)
    for _ in range(3):
        m = dominance_margin(f, k, x)
        slope = _margin_slope(f, k, x)
        if m == 0.0 or slope == 0.0:
            break
        nxt = x - m / slope
        if not (a <= nxt <= b) or abs(dominance_margin(f, k, nxt)) >= abs(m):
            break
        x = nxt
    return x


def _expand_until(fun, x0: float, step: float, want_positive: bool) -> float:
    x = x0 + step
    while (fun(x) > 0) != want_positive:
        step *= 2.0
        x = x0 + step
        if not math.isfinite(x):
            raise ArithmeticError("bracket expansion diverged")
    return x


def margin_maximiser(f: ExpSum, k: int) -> float:
    """Abscissa where the concave margin ``m_k`` peaks (``-inf``/``+inf`` for the end terms)."""
    if k == 0:
        return -math.inf
    if k == len(f) - 1:
        return math.inf
    lo, hi = search_bounds(f)
    slope = lambda x: _margin_slope(f, k, x)
    if slope(lo) <= 0:
        lo = _expand_until(slope, lo, -1.0, want_positive=True)
    if slope(hi) >= 0:
        hi = _expand_until(slope, hi, 1.0, want_positive=False)
    return _bisect(slope, lo, hi, tol=1e-13)


def dominance_intervals(f: ExpSum, k: int) -> list[tuple[float, float]]:
    """Maximal open intervals on which term ``k`` strictly dominates.

    Concavity of the margin means there is at most one; intervals thinner
    than ``MIN_REGION_WIDTH`` (tangential contact) are discarded.
    """
    margin = lambda x: dominance_margin(f, k, x)
    last = len(f) - 1
    lo, hi = search_bounds(f)
    if k == 0:
        if margin(hi) > 0:
            hi = _expand_until(margin, hi, 1.0, want_positive=False)
        return [(-math.inf, _margin_root(f, k, lo, hi))]
    if k == last:
        if margin(lo) > 0:
            lo = _expand_until(margin, lo, -1.0, want_positive=False)
        return [(_margin_root(f, k, lo, hi), math.inf)]
    peak = margin_maximiser(f, k)
    if margin(peak) <= 0:
        return []
    left = _expand_until(margin, peak, -1.0, want_positive=False)
    right = _expand_until(margin, peak, 1.0, want_positive=False)
    a, b = _margin_root(f, k, left, peak), _margin_root(f, k, peak, right)
    if b - a < MIN_REGION_WIDTH:
        return []
    return [(a, b)]


def decompose(f: ExpSum) -> StripDecomposition:
    """Zero-free regions and critical strips, left to right.

    A non-normalized sum is normalized first; the geometry is unchanged.
    """
    f = as_normalized(f)
    regions = []
    for k in range(len(f)):
        regions.extend(ZeroFreeRegion(a, b, k) for a, b in dominance_intervals(f, k))
    regions.sort(key=lambda r: r.x_lo)
    for i in range(len(regions) - 1):
        left, right = regions[i], regions[i + 1]
        if right.x_lo < left.x_hi:
            # a strip narrower than double resolution: bisection noise crossed its
            # ends, so collapse it and keep the neighbouring regions flush with it
            mid = 0.5 * (left.x_hi + right.x_lo)
            regions[i] = replace(left, x_hi=mid)
            regions[i + 1] = replace(right, x_lo=mid)
    strips = [CriticalStrip(left.x_hi, right.x_lo, left.dominant, right.dominant)
              for left, right in zip(regions, regions[1:])]
    return StripDecomposition(tuple(regions), tuple(strips))


@dataclass(frozen=True)
class TheoremACheck:
    holds: bool
    witness: Optional[tuple[float, int]] = None

    def __bool__(self):
        return self.holds


def theorem_a_check(f: ExpSum, sigma0: float, sigma1: float,
                    tol: float = 1e-13, floor: float = 1e-9) -> TheoremACheck:
    """Test whether every ``sigma`` in ``(sigma0, sigma1)`` satisfies

        1 <= sum_{j>=1} |H_j| e^{w_j sigma}
        |H_k| e^{w_k sigma} <= 1 + sum_{j != k} |H_j| e^{w_j sigma},   k = 1..n

    i.e. no term strictly dominates.  Under rational independence of the
    frequencies this is equivalent to ``(sigma0, sigma1)`` lying in the closure
    of the real parts of the zeros; independence is the caller's assertion.

    The interior is scanned on a grid whose step is halved until two
    successive levels agree (step floor ``floor``).  Each concave margin is
    also probed at its maximiser clipped to the interval, which catches
    violations narrower than any grid.  The witness is the leftmost violating
    ``(sigma, k)`` found.
    """
    f = as_normalized(f)
    if not sigma0 < sigma1:
        raise ValueError("need sigma0 < sigma1")
    m = len(f)
    peaks = []
    for k in range(m):
        p = min(max(margin_maximiser(f, k), sigma0), sigma1)
        # the interval is open: nudge clipped endpoints inside
        p = min(max(p, sigma0 + 0.25 * min(floor, sigma1 - sigma0)),
                sigma1 - 0.25 * min(floor, sigma1 - sigma0))
        peaks.append(p)

    def scan(num):
        xs = np.linspace(sigma0, sigma1, num + 1)[1:-1]
        xs = np.union1d(xs, peaks)
        margins = np.array([dominance_margin(f, k, xs) for k in range(m)])
        bad = margins > tol
        cols = np.flatnonzero(bad.any(axis=0))
        if cols.size == 0:
            return None
        c = cols[0]
        return float(xs[c]), int(np.flatnonzero(bad[:, c])[0])

    num = 64
    previous = scan(num)
    while (sigma1 - sigma0) / num > floor:
        num *= 2
        current = scan(num)
        if (current is None) == (previous is None):
            previous = current
            break
        previous = current
    return TheoremACheck(previous is None, previous)
