"""Finite-horizon checks of the zero-counting laws.

Counts in windows ``[y0, y0 + r)`` are accumulated band by band, so a grid
of ``r`` values costs one pass of the vertical contour sides up to ``max(r)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .core import ExpSum, as_normalized
from .strips import StripDecomposition, decompose
from .winding import count_zeros, spanning_rectangle, strip_rectangle
from .zeros import find_all_zeros


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("EXPSUM_THREADS", "1")))
    except ValueError:
        return 1


def default_r_grid(r_min: float = 10.0, r_max: float = 2000.0, num: int = 40,
                   jitter: float = 0.03, seed: int = 0) -> list[float]:
    """Geometric grid with multiplicative jitter, so samples do not resonate with zero spacings."""
    rng = np.random.default_rng(seed)
    base = np.geomspace(r_min, r_max, num)
    factors = np.exp(rng.uniform(-jitter, jitter, num))
    factors[0] = factors[-1] = 1.0
    return sorted(float(r) for r in np.clip(base * factors, r_min, r_max))


def _cumulative_counts(f: ExpSum, make_rect, r_values: Sequence[float], y0: float) -> list[int]:
    counts = []
    total = 0
    prev = 0.0
    for r in r_values:
        if r < prev:
            raise ValueError("r_values must be increasing")
        if r > prev:
            total += count_zeros(f, make_rect(y0 + prev, y0 + r)).count
            prev = r
        counts.append(total)
    return counts


@dataclass(frozen=True)
class DensityReport:
    strip_index: int
    slope_expected: float
    samples: tuple[tuple[float, int, float], ...]
    max_abs_deviation: float
    langer_max_deviation: float
    langer_n: int
    y0: float = 0.0

    @property
    def r(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def counts(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])

    @property
    def deviations(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])


def strip_counts(f: ExpSum, strip_index: int, r_values: Sequence[float], y0: float = 0.0,
                 decomposition: Optional[StripDecomposition] = None) -> list[int]:
    """Zeros of the strip with ``y0 <= Im z < y0 + r`` for each ``r``."""
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    return _cumulative_counts(
        f, lambda a, b: strip_rectangle(dec, strip_index, a, b), r_values, y0)


def langer_counts(f: ExpSum, r_values: Sequence[float], y0: float = 0.0,
                  decomposition: Optional[StripDecomposition] = None) -> list[int]:
    """Zeros of ``f`` (all strips) with ``y0 <= Im z < y0 + r`` for each ``r``."""
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    return _cumulative_counts(f, lambda a, b: spanning_rectangle(dec, a, b), r_values, y0)


def langer_check(f: ExpSum, r_values: Sequence[float], y0: float = 0.0,
                 decomposition: Optional[StripDecomposition] = None) -> tuple[float, bool]:
    """``max_r |n(r) - w_n r / (2 pi)|`` and whether it stays within ``n``."""
    f = as_normalized(f)
    counts = langer_counts(f, r_values, y0, decomposition)
    slope = f.freqs[-1] / (2 * math.pi)
    dev = max((abs(c - slope * r) for r, c in zip(r_values, counts)), default=0.0)
    return float(dev), bool(dev <= f.n + 1e-6)


def strip_density(f: ExpSum, strip_index: int, r_values: Sequence[float], y0: float = 0.0,
                  decomposition: Optional[StripDecomposition] = None,
                  langer: Optional[float] = None) -> DensityReport:
    """Counts in one critical strip against the line ``|w_j - w_k| r / (2 pi)``.

    ``langer`` may carry a precomputed global maximum deviation; otherwise it
    is computed over the same ``r`` grid.
    """
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    strip = dec.strips[strip_index]
    slope = abs(f.freqs[strip.right_dominant] - f.freqs[strip.left_dominant]) / (2 * math.pi)
    counts = strip_counts(f, strip_index, r_values, y0, dec)
    samples = tuple((float(r), int(c), float(c - slope * r)) for r, c in zip(r_values, counts))
    if langer is None:
        langer = langer_check(f, r_values, y0, dec)[0]
    return DensityReport(strip_index, float(slope), samples,
                         max((abs(s[2]) for s in samples), default=0.0),
                         float(langer), f.n, float(y0))


def density_reports(f: ExpSum, r_values: Sequence[float], y0: float = 0.0) -> list[DensityReport]:
    """One :class:`DensityReport` per critical strip, sharing the global count."""
    f = as_normalized(f)
    dec = decompose(f)
    langer = langer_check(f, r_values, y0, dec)[0]
    run = lambda i: strip_density(f, i, r_values, y0, dec, langer)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(run, range(len(dec.strips))))


def unit_band_counts(f: ExpSum, strip_index: int, r_values: Sequence[float],
                     band: float = 1.0, lower: bool = False,
                     decomposition: Optional[StripDecomposition] = None) -> list[tuple[float, int]]:
    """Zeros of the strip with ``r <= Im z < r + band`` (or ``-r - band <= Im z < -r``)."""
    if band <= 0:
        raise ValueError("band must be positive")
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    out = []
    for r in r_values:
        lo = -r - band if lower else r
        rect = strip_rectangle(dec, strip_index, lo, lo + band)
        out.append((float(r), count_zeros(f, rect).count))
    return out


@dataclass(frozen=True)
class RealPartClosure:
    histogram: tuple[int, ...]
    bin_edges: tuple[float, ...]
    min: float
    max: float
    max_gap: float
    real_parts: tuple[float, ...] = field(repr=False)


def real_part_closure(f: ExpSum, y_horizon: float, bins: int = 32,
                      method: str = "winding") -> RealPartClosure:
    """Empirical distribution of ``Re z`` over zeros with ``-y_horizon <= Im z < y_horizon``."""
    if y_horizon <= 0:
        raise ValueError("y_horizon must be positive")
    zeros = find_all_zeros(f, -y_horizon, y_horizon, method=method)
    xs = np.sort([r.z.real for r in zeros])
    if xs.size == 0:
        return RealPartClosure((), (), math.nan, math.nan, math.nan, ())
    hist, edges = np.histogram(xs, bins=bins)
    gap = float(np.diff(xs).max()) if xs.size > 1 else 0.0
    return RealPartClosure(tuple(int(h) for h in hist), tuple(float(e) for e in edges),
                           float(xs[0]), float(xs[-1]), gap, tuple(float(x) for x in xs))


# ---------------------------------------------------------------- discs

def disc_radius(modulus):
    """``(1 + |z|)^-1 log^-2(e + |z|)``."""
    modulus = np.asarray(modulus, dtype=float)
    return 1.0 / ((1.0 + modulus) * np.log(math.e + modulus) ** 2)


def tail_bound(f: ExpSum, t0: float) -> float:
    """``3 int_{t0}^inf n(t) dt / ((1+t)^2 log^2(e+t))`` with ``n(t) = (w_n/pi) t + n``.

    Upper bound for the sum of disc radii over zeros with modulus above ``t0``.
    """
    f = as_normalized(f)
    slope, const = f.freqs[-1] / math.pi, f.n

    # substitute s = log(e + t), so dt = e^s ds and the integrand decays like 1/s^2;
    # written in u = e^{-s} to stay finite as s grows
    def integrand(s):
        u = math.exp(-s)
        d = 1.0 + (1.0 - math.e) * u  # (1 + t) e^{-s}
        return (slope + (const - slope) * u / d) / (d * s * s)

    val, _ = quad(integrand, math.log(math.e + t0), math.inf, limit=200)
    return 3.0 * val


@dataclass(frozen=True)
class DiscExperiment:
    radii_partial_sum: float
    analytic_tail_bound: float
    lines_tested: int
    lines_hitting_infinitely: int
    measure_estimate_epsilon: float
    modulus_horizon: float = 0.0
    zero_count: int = 0
    cutoff_index: int = 0
    tail_modulus: float = 0.0
    line_abscissas: tuple[float, ...] = ()
    hits_per_line: tuple[int, ...] = ()
    tail_hits_per_line: tuple[int, ...] = ()
    partial_sums: tuple[float, ...] = field(default=(), repr=False)
    moduli: tuple[float, ...] = field(default=(), repr=False)


def disc_experiment(f: ExpSum, modulus_horizon: float, line_samples: int,
                    cutoff_index: Optional[int] = None, tail_modulus: Optional[float] = None,
                    lines: Sequence[float] = (), seed: int = 0,
                    method: str = "auto") -> DiscExperiment:
    """Discs ``|z - z_n| < r_n`` around the zeros with ``|z_n| <= modulus_horizon``.

    Zeros are listed with multiplicity by increasing modulus.  ``line_samples``
    abscissas are drawn uniformly over the span of the critical strips (plus
    any explicit ``lines``); for each line the discs it meets are counted in
    total and beyond ``tail_modulus`` (default ``modulus_horizon / 100``).  A
    line counts as hitting infinitely often when it still meets a disc in the
    last decade of modulus.  ``measure_estimate_epsilon`` is
    ``sum_{n >= cutoff_index} 2 r_n``, by default from the first zero beyond
    ``tail_modulus``.
    """
    if modulus_horizon <= 0:
        raise ValueError("modulus_horizon must be positive")
    f = as_normalized(f)
    dec = decompose(f)
    if tail_modulus is None:
        tail_modulus = modulus_horizon / 100.0
    zeros = find_all_zeros(f, -modulus_horizon, modulus_horizon, method=method, decomposition=dec)
    pts = [r.z for r in zeros for _ in range(r.multiplicity) if abs(r.z) <= modulus_horizon]
    pts = np.array(sorted(pts, key=abs), dtype=complex)
    mod = np.abs(pts)
    radii = disc_radius(mod)
    partial = np.cumsum(radii)
    if cutoff_index is None:
        cutoff_index = int(np.searchsorted(mod, tail_modulus, side="right"))
    eps = float(2.0 * radii[cutoff_index:].sum())

    x_lo, x_hi = dec.span
    rng = np.random.default_rng(seed)
    cs = np.concatenate([rng.uniform(x_lo, x_hi, line_samples), np.asarray(lines, dtype=float)])
    meets = np.abs(pts.real[None, :] - cs[:, None]) < radii[None, :]
    hits = meets.sum(axis=1)
    tail_hits = (meets & (mod > tail_modulus)[None, :]).sum(axis=1)
    last_decade = (meets & (mod > modulus_horizon / 10.0)[None, :]).any(axis=1)
    return DiscExperiment(
        radii_partial_sum=float(partial[-1]) if partial.size else 0.0,
        analytic_tail_bound=tail_bound(f, modulus_horizon),
        lines_tested=int(cs.size),
        lines_hitting_infinitely=int(last_decade.sum()),
        measure_estimate_epsilon=eps,
        modulus_horizon=float(modulus_horizon),
        zero_count=int(pts.size),
        cutoff_index=int(cutoff_index),
        tail_modulus=float(tail_modulus),
        line_abscissas=tuple(float(c) for c in cs),
        hits_per_line=tuple(int(h) for h in hits),
        tail_hits_per_line=tuple(int(h) for h in tail_hits),
        partial_sums=tuple(float(p) for p in partial),
        moduli=tuple(float(m) for m in mod),
    )
