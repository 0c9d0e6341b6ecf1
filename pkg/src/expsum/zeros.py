"""Zero localisation inside critical strips.

``find_zeros`` bisects the strip contour into boxes by winding counts and
polishes each isolated zero with Newton's method.  ``oracle_zeros_commensurable``
is an independent route for sums whose frequencies are integer multiples of
a common step: it solves the polynomial in ``u = exp(delta z)`` and maps the
roots back onto their vertical lattices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Union

import numpy as np

from .core import ExpSum, as_normalized, dominant_exponents, eval_logderiv, eval_scaled
from .errors import NearZeroDivide, NotCommensurable, PerturbationExhausted
from .strips import CriticalStrip, StripDecomposition, decompose
from .winding import Rectangle, count_zeros, strip_rectangle

Method = Literal["newton", "box-limit", "oracle"]

MIN_BOX = 1e-8
NEWTON_MAXIT = 50
NEWTON_TOL = 1e-12
CLUSTER_RESIDUAL = 1e-12
DERIVATIVE_RESIDUAL = 1e-8
RESIDUAL_TOL = 1e-9
SPLIT_FRACTION = 0.4883
# below this size a box that cannot be re-counted is reported as a cluster
CLUSTER_BOX = 1e-4
PHASE_SNAP = 1e-14


@dataclass(frozen=True)
class ZeroRecord:
    z: complex
    multiplicity: int
    strip_index: int
    residual_logmod: float
    method: Method
    dominant_exponent: float = 0.0

    @property
    def relative_residual_log(self) -> float:
        """``log|f(z)|`` minus the largest term's log-modulus at ``z``."""
        return self.residual_logmod - self.dominant_exponent


def _record(f: ExpSum, z: complex, mult: int, strip: int, method: Method) -> ZeroRecord:
    logmod = eval_scaled(f, z).logmod
    dom = float(dominant_exponents(f, z.real).max())
    return ZeroRecord(complex(z), int(mult), int(strip), float(logmod), method, dom)


def _sort_key(r: ZeroRecord):
    # rounding keeps zeros with equal imaginary parts in real-part order despite noise
    return (round(r.z.imag, 9), r.z.real)


# ---------------------------------------------------------------- Newton

def newton(f: ExpSum, z0: complex, maxit: int = NEWTON_MAXIT) -> Optional[complex]:
    """Newton iteration ``z <- z - f/f'`` from ``z0``.

    Returns ``None`` when the steps grow for three consecutive iterations,
    hit a critical point, or fail to settle within ``maxit`` steps.
    """
    z = complex(z0)
    prev = math.inf
    growth = 0
    for _ in range(maxit):
        try:
            g = eval_logderiv(f, z)
        except NearZeroDivide:
            return z
        if g == 0 or not cmath.isfinite(g):
            return None
        dz = 1.0 / g
        z -= dz
        if not cmath.isfinite(z):
            return None
        step = abs(dz)
        if step < NEWTON_TOL * max(1.0, abs(z)):
            return z
        growth = growth + 1 if step > prev else 0
        if growth >= 3:
            return None
        prev = step
    return None


def _relative_residual(f: ExpSum, z: complex) -> float:
    v = eval_scaled(f, z)
    return v.logmod - float(dominant_exponents(f, z.real).max())


def _cluster_point(f: ExpSum, box: Rectangle, m: int) -> Optional[complex]:
    """Zero of ``f^(m-1)`` inside ``box`` at which ``f`` vanishes to rounding level."""
    d = f.derivative(m - 1)
    z = newton(d, box.center)
    if z is None or not box.contains(z, 1e-10 * (1 + abs(z))):
        return None
    if _relative_residual(f, z) > math.log(CLUSTER_RESIDUAL):
        return None
    for j in range(1, m - 1):
        if _relative_residual(f.derivative(j), z) > math.log(DERIVATIVE_RESIDUAL):
            return None
    return z


def _split(box: Rectangle) -> tuple[Rectangle, Rectangle]:
    if box.width >= box.height:
        x = box.x_lo + SPLIT_FRACTION * box.width
        return (Rectangle(box.x_lo, x, box.y_lo, box.y_hi),
                Rectangle(x, box.x_hi, box.y_lo, box.y_hi))
    y = box.y_lo + SPLIT_FRACTION * box.height
    return (Rectangle(box.x_lo, box.x_hi, box.y_lo, y),
            Rectangle(box.x_lo, box.x_hi, y, box.y_hi))


def localize(f: ExpSum, rect: Rectangle, total: Optional[int] = None):
    """All zeros in ``rect`` as ``(z, multiplicity, method)`` triples.

    Boxes are halved (long side first) until each holds one zero, on which
    Newton is run from the box centre and accepted only if it lands inside
    the box.  A box holding ``m >= 2`` zeros is reported as one cluster of
    multiplicity ``m`` when ``f^(m-1)`` has a zero in it where ``f`` vanishes
    to rounding level, or when the box is smaller than ``MIN_BOX``.
    """
    if total is None:
        total = count_zeros(f, rect).count
    found = []
    stack = [(rect, total)]
    while stack:
        box, m = stack.pop()
        if m == 0:
            continue
        tol = 1e-10 * (1 + abs(box.center))
        if m == 1:
            z = newton(f, box.center)
            if z is not None and box.contains(z, tol) \
                    and _relative_residual(f, z) <= math.log(RESIDUAL_TOL):
                found.append((z, 1, "newton"))
                continue
        elif m <= f.n:  # a zero of a sum of n + 1 terms has multiplicity at most n
            z = _cluster_point(f, box, m)
            if z is not None:
                found.append((z, m, "box-limit"))
                continue
        if box.diameter < MIN_BOX:
            found.append((_best_point(f, box, m), m, "box-limit"))
            continue
        first, second = _split(box)
        try:
            c1 = count_zeros(f, first).count
            c2 = m - c1
            if not 0 <= c2 <= m:
                c2 = count_zeros(f, second).count
        except PerturbationExhausted:
            if box.diameter < CLUSTER_BOX:
                found.append((_best_point(f, box, m), m, "box-limit"))
                continue
            raise
        stack.append((second, c2))
        stack.append((first, c1))
    return found


def _best_point(f: ExpSum, box: Rectangle, m: int) -> complex:
    z = newton(f.derivative(m - 1), box.center) if m > 1 else newton(f, box.center)
    if z is not None and box.contains(z, 1e-10 * (1 + abs(z))):
        return z
    return box.center


def _strip_index(decomposition: StripDecomposition, strip) -> int:
    if isinstance(strip, (int, np.integer)):
        return int(strip)
    return decomposition.strips.index(strip)


def find_zeros(f: ExpSum, strip: Union[CriticalStrip, int], y_lo: float, y_hi: float,
               decomposition: Optional[StripDecomposition] = None) -> list[ZeroRecord]:
    """Zeros of ``f`` in one critical strip with ``y_lo <= Im z < y_hi``.

    Zeros on the window's bottom border are included and those on its top
    border excluded.  Records are sorted by imaginary then real part.
    """
    if not y_lo < y_hi:
        raise ValueError("need y_lo < y_hi")
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    idx = _strip_index(dec, strip)
    rect = strip_rectangle(dec, idx, y_lo, y_hi)
    out = []
    for z, m, method in localize(f, rect):
        owner = dec.strip_of(z.real)
        owner = dec.nearest_strip(z.real) if owner is None else owner
        if owner != idx:  # shared boundary line: leftmost strip owns it
            continue
        out.append(_record(f, z, m, idx, method))
    return sorted(out, key=_sort_key)


def find_all_zeros(f: ExpSum, y_lo: float, y_hi: float, method: str = "winding",
                   decomposition: Optional[StripDecomposition] = None) -> list[ZeroRecord]:
    """Zeros in every critical strip for ``y_lo <= Im z < y_hi``.

    ``method`` is ``"winding"``, ``"oracle"`` (commensurable frequencies only)
    or ``"auto"`` (oracle when applicable).
    """
    f = as_normalized(f)
    dec = decomposition or decompose(f)
    if method in ("oracle", "auto"):
        try:
            return oracle_zeros_commensurable(f, y_lo, y_hi, decomposition=dec)
        except NotCommensurable:
            if method == "oracle":
                raise
    out = []
    for i in range(len(dec.strips)):
        out.extend(find_zeros(f, i, y_lo, y_hi, decomposition=dec))
    return sorted(out, key=_sort_key)


# ---------------------------------------------------------------- oracle

def commensurable_grid(freqs, max_denominator: int = 64, tol: float = 1e-12):
    """Integers ``p_j`` with gcd 1 and step ``delta`` such that ``freqs = p * delta``."""
    freqs = [float(w) for w in freqs]
    if not freqs or min(freqs) <= 0:
        raise NotCommensurable("need positive frequencies")
    base = freqs[0]
    fracs = []
    for w in freqs:
        r = w / base
        q = Fraction(r).limit_denominator(max_denominator)
        if abs(r - float(q)) > tol * max(1.0, r):
            raise NotCommensurable(f"frequency ratio {r!r} is not rational")
        fracs.append(q)
    lcm = 1
    for q in fracs:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in fracs]
    g = 0
    for p in ints:
        g = math.gcd(g, p)
    p = [i // g for i in ints]
    delta = base * g / lcm
    for w, pj in zip(freqs, p):
        if abs(w - pj * delta) > tol * max(1.0, w):
            raise NotCommensurable("rational reconstruction is inconsistent")
    return p, delta


def aberth_roots(coeffs, maxit: int = 500, tol: float = 1e-13) -> np.ndarray:
    """All roots of ``sum_p coeffs[p] u^p`` by Aberth-Ehrlich simultaneous iteration.

    Starting points lie on the circle of radius ``1 + max |c_p / c_deg|``.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = c.size - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    desc = c[::-1]
    ddesc = np.polyder(desc)
    radius = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    angles = 2 * np.pi * np.arange(deg) / deg + 0.4
    x = radius * np.exp(1j * angles)
    done = np.zeros(deg, dtype=bool)
    for _ in range(maxit):
        pv = np.polyval(desc, x)
        dpv = np.polyval(ddesc, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(pv == 0, 0, pv / dpv)
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, np.inf)
            corr = (1.0 / diff).sum(axis=1)
            w = ratio / (1.0 - ratio * corr)
        w = np.where(np.isfinite(w) & ~done, w, 0)
        x = x - w
        done |= np.abs(w) <= tol * np.maximum(np.abs(x), 1e-300)
        if done.all():
            break
    return x


def _poly_newton(desc, u0: complex, maxit: int = 50) -> complex:
    ddesc = np.polyder(desc)
    u = complex(u0)
    for _ in range(maxit):
        d = np.polyval(ddesc, u)
        if d == 0:
            break
        step = np.polyval(desc, u) / d
        u -= step
        if abs(step) <= 1e-15 * max(1.0, abs(u)):
            break
    return u


def polynomial_roots(coeffs, cluster_radius: float = 1e-6):
    """Distinct roots with multiplicities, as ``[(root, multiplicity), ...]``.

    An ``m``-fold root comes out of the simultaneous iteration as ``m``
    points spread over a radius of order ``eps**(1/m)``, so neighbours are
    linked within ``cluster_radius**(1/m)`` (relative) for the group being
    grown.  A group of size ``m`` is re-centred on the zero of the
    ``(m-1)``-th derivative, which is simple and hence well conditioned, and
    kept only if the polynomial and its first ``m-1`` derivatives all vanish
    there to rounding level; otherwise its members stay separate.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    roots = [complex(u) for u in aberth_roots(c)]
    desc = c[::-1]
    out = []
    unused = sorted(roots, key=lambda v: (v.real, v.imag))
    while unused:
        grp = [unused.pop(0)]
        grew = True
        while grew:
            grew = False
            centre = complex(np.mean(grp))
            reach = cluster_radius ** (1.0 / (len(grp) + 1)) * (1 + abs(centre))
            for u in list(unused):
                if abs(u - centre) <= reach:
                    grp.append(u)
                    unused.remove(u)
                    grew = True
                    break
        while len(grp) > 1 and not _is_multiple_root(desc, grp):
            # drop the member farthest from the centre and try again
            centre = np.mean(grp)
            far = max(grp, key=lambda v: abs(v - centre))
            grp.remove(far)
            out.append((_poly_newton(desc, far), 1))
        m = len(grp)
        centre = complex(np.mean(grp))
        refined = _derivative_root(desc, centre, m) if m > 1 else _poly_newton(desc, centre)
        out.append((refined, m))
    return out


def _derivative_root(desc, centre: complex, m: int) -> complex:
    target = desc
    for _ in range(m - 1):
        target = np.polyder(target)
    return _poly_newton(target, centre)


def _is_multiple_root(desc, grp) -> bool:
    m = len(grp)
    centre = complex(np.mean(grp))
    u = _derivative_root(desc, centre, m)
    spread = max(abs(v - centre) for v in grp)
    if abs(u - centre) > 2 * spread + 1e-12 * (1 + abs(centre)):
        return False
    d = desc
    for _ in range(m - 1):
        scale = np.polyval(np.abs(d), abs(u))
        if abs(np.polyval(d, u)) > 1e-9 * scale:
            return False
        d = np.polyder(d)
    return True


def oracle_zeros_commensurable(f: ExpSum, y_lo: float, y_hi: float,
                               decomposition: Optional[StripDecomposition] = None
                               ) -> list[ZeroRecord]:
    """Exact zero lattice of a sum with commensurable frequencies.

    With ``w_j = p_j delta`` the sum is ``P(u)`` for ``u = exp(delta z)``;
    every root ``u*`` gives the zeros ``(log|u*| + i(arg u* + 2 pi m)) / delta``.
    Zeros with ``y_lo <= Im z < y_hi`` are returned, sorted by imaginary part.
    """
    f = as_normalized(f)
    p, delta = commensurable_grid(f.freqs[1:])
    coeffs = np.zeros(max(p) + 1, dtype=complex)
    coeffs[0] = 1.0
    for pj, h in zip(p, f.coeffs[1:]):
        coeffs[pj] = h
    dec = decomposition or decompose(f)
    period = 2 * math.pi / delta
    out = []
    for u, mult in polynomial_roots(coeffs):
        x = math.log(abs(u)) / delta
        arg = cmath.phase(u)
        if abs(u.imag) <= PHASE_SNAP * abs(u):  # real root: keep its lattice on Im z = 0 (mod period)
            arg = 0.0 if u.real > 0 else math.pi
        base = arg / delta
        k = math.ceil((y_lo - base) / period)
        strip = dec.strip_of(x)
        strip = dec.nearest_strip(x) if strip is None else strip
        while True:
            y = base + k * period
            if y >= y_hi:
                break
            if y >= y_lo:
                out.append(_record(f, complex(x, y), mult, strip, "oracle"))
            k += 1
    return sorted(out, key=_sort_key)
