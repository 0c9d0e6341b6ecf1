"""Exponential sums with constant coefficients and real frequencies.

A sum ``g(z) = sum_j F_j exp(lambda_j z)`` is stored as a tuple of
:class:`ExpTerm` sorted by frequency.  All evaluation happens relative to the
pointwise-dominant term so that ``exp(w_n x)`` never overflows: for a point
``z = x + iy`` let ``E_j = w_j x + log|H_j|`` and ``E = max_j E_j``; then

    f(z) = exp(E) * S(z),    S(z) = sum_j exp(E_j - E) exp(i (w_j y + arg H_j))

where every summand of ``S`` has modulus at most one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateSum, InvalidInput, NearZeroDivide

# Largest admissible ratio between coefficient moduli.
MAX_COEFF_RATIO = 1e300
LOGDERIV_FLOOR = 1e-300


@dataclass(frozen=True)
class ExpTerm:
    coeff: complex
    freq: float

    def __post_init__(self):
        coeff = complex(self.coeff)
        freq = float(self.freq)
        if coeff == 0:
            raise InvalidInput("zero coefficient terms are not allowed")
        if not (cmath.isfinite(coeff) and math.isfinite(freq)):
            raise InvalidInput(f"non-finite term ({coeff!r}, {freq!r})")
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "freq", freq)


@dataclass(frozen=True)
class ExpSum:
    """Immutable exponential sum ``sum_j coeff_j * exp(freq_j * z)``.

    Terms may be given in any order; they are sorted by frequency and
    duplicate frequencies are rejected.  ``normalized`` is true exactly when
    the sum has the form ``1 + H_1 e^{w_1 z} + ... + H_n e^{w_n z}`` with
    ``0 < w_1 < ... < w_n`` and ``n >= 1``.
    """

    terms: tuple[ExpTerm, ...]
    coeffs: np.ndarray = field(init=False, repr=False, compare=False)
    freqs: np.ndarray = field(init=False, repr=False, compare=False)
    log_abs: np.ndarray = field(init=False, repr=False, compare=False)
    args: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(t if isinstance(t, ExpTerm) else ExpTerm(*t) for t in self.terms)
        if not terms:
            raise DegenerateSum("an exponential sum needs at least one term")
        terms = tuple(sorted(terms, key=lambda t: t.freq))
        freqs = np.array([t.freq for t in terms], dtype=float)
        if np.any(np.diff(freqs) <= 0):
            raise InvalidInput("duplicate frequencies")
        coeffs = np.array([t.coeff for t in terms], dtype=complex)
        mods = np.abs(coeffs)
        if math.log(mods.max()) - math.log(mods.min()) > math.log(MAX_COEFF_RATIO):
            raise InvalidInput("coefficient moduli differ by more than 1e300")
        for name, arr in (("coeffs", coeffs), ("freqs", freqs),
                          ("log_abs", np.log(mods)), ("args", np.angle(coeffs))):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_freq_list", [float(w) for w in freqs])
        object.__setattr__(self, "_log_abs_list", [float(v) for v in np.log(mods)])

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[complex, float]]) -> "ExpSum":
        """Build from ``(coeff, freq)`` pairs."""
        return cls(tuple(ExpTerm(c, w) for c, w in pairs))

    def __len__(self):
        return len(self.terms)

    @property
    def n(self) -> int:
        """Number of terms besides the leading one."""
        return len(self.terms) - 1

    @property
    def normalized(self) -> bool:
        first = self.terms[0]
        return len(self.terms) >= 2 and first.coeff == 1 and first.freq == 0.0

    def derivative(self, order: int = 1) -> "ExpSum":
        """Return the ``order``-th derivative; terms with zero frequency drop out."""
        pairs = [(t.coeff * t.freq**order, t.freq) for t in self.terms
                 if order == 0 or t.freq != 0.0]
        return ExpSum.from_pairs(pairs)

    def __call__(self, z):
        return evaluate(self, z)


@dataclass(frozen=True)
class LogScaledValue:
    logmod: float
    phase: float
    dominant_index: int

    @property
    def value(self) -> complex:
        if self.logmod == -math.inf:
            return 0j
        return cmath.rect(math.exp(self.logmod), self.phase)


def normalize(g: ExpSum) -> tuple[ExpSum, float, complex]:
    """Divide out the lowest-frequency term.

    Returns ``(f, shift, prefactor)`` with ``g(z) = prefactor * exp(shift*z) * f(z)``.
    """
    if len(g.terms) < 2:
        raise DegenerateSum("normalization needs at least two terms")
    if g.normalized:
        return g, 0.0, 1.0 + 0j
    lead = g.terms[0]
    f = ExpSum(tuple(ExpTerm(t.coeff / lead.coeff, t.freq - lead.freq) for t in g.terms))
    # the division can leave a rounding error in the leading coefficient
    f = ExpSum((ExpTerm(1.0, 0.0),) + f.terms[1:])
    return f, lead.freq, lead.coeff


def as_normalized(f: ExpSum) -> ExpSum:
    return f if f.normalized else normalize(f)[0]


def dominant_exponents(f: ExpSum, x) -> np.ndarray:
    """Per-term log-moduli ``w_j x + log|H_j|``; shape ``(len(f),) + shape(x)``."""
    x = np.asarray(x, dtype=float)
    return np.multiply.outer(f.freqs, x) + f.log_abs.reshape((-1,) + (1,) * x.ndim)


def scaled_frame(f: ExpSum, z):
    """Vectorised scaled evaluation.

    Returns ``(E, k, S, Sw)`` where ``E`` is the dominant exponent, ``k`` the
    dominant index (smallest index on ties), ``S`` the scaled sum with
    ``f(z) = exp(E) * S`` and ``Sw`` the scaled sum of ``w_j`` times each term,
    so that ``f'(z) / f(z) = Sw / S``.
    """
    z = np.asarray(z, dtype=complex)
    ex = dominant_exponents(f, z.real)
    k = np.argmax(ex, axis=0)
    emax = np.take_along_axis(ex, k[None, ...], axis=0)[0]
    shape = (-1,) + (1,) * z.ndim
    unit = (f.coeffs / np.abs(f.coeffs)).reshape(shape)
    terms = np.exp(ex - emax) * unit * np.exp(1j * np.multiply.outer(f.freqs, z.imag))
    s = terms.sum(axis=0)
    sw = (f.freqs.reshape(shape) * terms).sum(axis=0)
    return emax, k, s, sw


def evaluate(f: ExpSum, z) -> complex:
    """``f(z)`` by compensated summation in the scaled frame.

    May overflow to ``inf`` for extreme ``Re z``; use :func:`eval_scaled` there.
    Array input is evaluated elementwise without compensation.
    """
    if np.ndim(z) > 0:
        emax, _, s, _ = scaled_frame(f, z)
        with np.errstate(over="ignore"):
            return np.exp(emax) * s
    z = complex(z)
    if cmath.isnan(z):
        return complex(math.nan, math.nan)
    ex = f.freqs * z.real + f.log_abs
    k = int(np.argmax(ex))
    emax = float(ex[k])
    terms = [math.exp(e - emax) * (c / abs(c)) * cmath.exp(1j * w * z.imag)
             for e, w, c in zip(ex, f.freqs, f.coeffs)]
    s = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    if s == 0:
        return 0j
    try:
        scale = math.exp(emax)
    except OverflowError:
        return complex(math.copysign(math.inf, s.real) if s.real else 0.0,
                       math.copysign(math.inf, s.imag) if s.imag else 0.0)
    return scale * s


def eval_scaled(f: ExpSum, z: complex) -> LogScaledValue:
    """Log-modulus, phase and dominant index of ``f(z)``; never overflows."""
    z = complex(z)
    emax, k, s, _ = scaled_frame(f, z)
    mod = abs(complex(s))
    logmod = float(emax) + math.log(mod) if mod > 0 else -math.inf
    return LogScaledValue(logmod, float(np.angle(s)), int(k))


def eval_logderiv(f: ExpSum, z: complex) -> complex:
    """``f'(z)/f(z)``; the dominant scaling cancels between numerator and denominator."""
    z = complex(z)
    _, _, s, sw = scaled_frame(f, z)
    s = complex(s)
    if abs(s) < LOGDERIV_FLOOR:
        raise NearZeroDivide(z)
    return complex(sw) / s


def relative_logmod(f: ExpSum, z) -> np.ndarray:
    """``log|f(z)| - max_j log|H_j e^{w_j z}|``; at most ``log(len(f))``."""
    _, _, s, _ = scaled_frame(f, z)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(s))


def from_polynomial(coeffs: Sequence[complex], delta: float = 1.0) -> ExpSum:
    """Exponential sum ``sum_p c_p exp(p*delta*z)`` from ascending polynomial coefficients.

    Zero coefficients are skipped.
    """
    pairs = [(c, p * delta) for p, c in enumerate(coeffs) if c != 0]
    return ExpSum.from_pairs(pairs)
