"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from expsum import (ExpSum, ZeroOnPath, ZeroAtAnchor, backlund_bound, decompose,
                    find_all_zeros, oracle_zeros_commensurable, strip_rectangle)
from expsum.density import (default_r_grid, density_reports, disc_experiment, disc_radius,
                            real_part_closure, tail_bound)

from conftest import random_sum
from test_zeros import commensurable_sum, match_zeros

RESULTS: list[str] = []
TWO_PI = 2 * math.pi


def report(number: int, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def random_family(seed: int, count: int = 50):
    """Normalized sums with n <= 5, w in (0, 5], |H| in [0.2, 5]."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 6))
        w = np.sort(rng.uniform(0.0, 5.0, n))
        if w[0] <= 0 or np.any(np.diff(w) <= 0):
            continue
        mod = rng.uniform(0.2, 5.0, n)
        arg = rng.uniform(-math.pi, math.pi, n)
        out.append(ExpSum.from_pairs([(1, 0)] + [(m * complex(math.cos(a), math.sin(a)), wj)
                                                 for m, a, wj in zip(mod, arg, w)]))
    return out


R_GRID = sorted(set(default_r_grid(10.0, 2000.0, 48, seed=2024)) | {200.0})
FAMILY_SEED = 1729
_family_reports = {}


def family_reports():
    if not _family_reports:
        for i, f in enumerate(random_family(FAMILY_SEED)):
            _family_reports[i] = (f, density_reports(f, R_GRID))
    return _family_reports


def test_criterion_1_example_one_boundaries():
    f = ExpSum.from_pairs([(1, 0), (1, 1), (1, 2)])
    t = time.perf_counter()
    dec = decompose(f)
    elapsed = time.perf_counter() - t
    want = (math.log((math.sqrt(5) - 1) / 2), math.log((math.sqrt(5) + 1) / 2))
    (s,) = dec.strips
    err = max(abs(s.x_lo - want[0]), abs(s.x_hi - want[1]))
    ok = len(dec.regions) == 2 and [r.dominant for r in dec.regions] == [0, 2] \
        and err <= 1e-10 and elapsed < 1.0
    report(1, ok, f"2 regions, boundary error {err:.2e} (<= 1e-10), {elapsed:.3f} s (< 1 s)")


def test_criterion_2_example_two_lattice():
    f = ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)])
    y_lo, y_hi = -100 * math.pi, 100 * math.pi
    t = time.perf_counter()
    recs = find_all_zeros(f, y_lo, y_hi, method="winding")
    elapsed = time.perf_counter() - t
    # independent enumeration of the lattice in the half-open window
    lattice = [(complex(math.log(a), TWO_PI * k), s) for s, a in ((0, 2), (1, 3))
               for k in range(-60, 61) if y_lo <= TWO_PI * k < y_hi]
    lattice.sort(key=lambda p: (p[0].imag, p[0].real))
    same = len(recs) == len(lattice) and all(
        abs(r.z - z) <= 1e-9 and r.strip_index == s and r.multiplicity == 1
        for r, (z, s) in zip(recs, lattice))
    per = [sum(1 for r in recs if r.strip_index == i) for i in (0, 1)]
    ok = same and per == [100, 100] and elapsed < 30.0
    err = max((abs(r.z - z) for r, (z, _) in zip(recs, lattice)), default=math.inf)
    report(2, ok, f"{len(recs)} zeros ({per[0]} on Re z = log 2, {per[1]} on Re z = log 3) "
                  f"match the lattice, max error {err:.1e}, strips attributed, {elapsed:.2f} s")


def test_criterion_3_langer_bound():
    worst = -math.inf
    failures = []
    for i, (f, reps) in family_reports().items():
        dev = reps[0].langer_max_deviation
        worst = max(worst, dev - f.n)
        if dev > f.n + 1e-6:
            failures.append((i, dev, f.n))
    report(3, not failures, f"50 sums, {len(R_GRID)} r in [10, 2000]; "
                            f"max (deviation - n) = {worst:.3f}; violations {failures}")


def _lsq_slope(r, c):
    r, c = np.asarray(r, float), np.asarray(c, float)
    return float(np.polyfit(r, c, 1)[0])


def test_criterion_4_per_strip_law():
    bad = []
    strips = 0
    worst_growth, worst_slope = -math.inf, 0.0
    for i, (f, reps) in family_reports().items():
        for rep in reps:
            strips += 1
            dev = np.abs(rep.deviations)
            r = rep.r
            growth = dev.max() - dev[r <= 200.0].max()
            sel = r >= 100.0
            slope = _lsq_slope(r[sel], rep.counts[sel])
            rel = abs(slope / rep.slope_expected - 1)
            worst_growth = max(worst_growth, growth)
            worst_slope = max(worst_slope, rel)
            if not (growth < 1.0 and rel <= 0.02):
                bad.append(f"sum {i} strip {rep.strip_index}: growth {growth:.3f}, slope error "
                           f"{100 * rel:.1f}%, {rep.counts[-1]} zeros at r = 2000")
    report(4, not bad, f"{strips} strips; worst running-max growth after r = 200: {worst_growth:.3f} "
                       f"(< 1); worst slope error {100 * worst_slope:.2f}% (<= 2%); failures {bad}")


def _analytic_midline_constant(f, x1, x2, k):
    Rp = 2 * abs(x2 - x1)
    h = np.abs(f.coeffs)
    w = f.freqs
    top = math.log(float(np.sum(h * np.exp(w * (x2 + Rp)))))
    mods = h * np.exp(w * x2)
    low = math.log(float(mods[k] - (mods.sum() - mods[k])))
    return (top - low) / (2 * math.log(2)) + 0.5


def test_criterion_5_backlund():
    rng = np.random.default_rng(5150)
    done, skipped, worst = 0, 0, -math.inf
    violations = []
    while done < 1000:
        f = random_sum(rng)
        x0, x1 = decompose(f).span
        z1 = complex(rng.uniform(x0 - 2, x1 + 2), rng.uniform(-100, 100))
        T = float(rng.uniform(0.2, 12.0))
        try:
            b = backlund_bound(f, z1, z1 + 1j * T, 2 * T)
        except (ZeroOnPath, ZeroAtAnchor):
            skipped += 1
            continue
        done += 1
        worst = max(worst, b.lhs - b.bound)
        if not b.lhs <= b.bound + 1e-9:
            violations.append((z1, T, b.lhs, b.bound))
    # midline segments on the top edge of strip contours, r up to 2000
    mid_bad = []
    mid_max = 0.0
    for f, _ in list(family_reports().values())[:20]:
        dec = decompose(f)
        for i, s in enumerate(dec.strips):
            rect = strip_rectangle(dec, i, 0.0, 1.0)
            xa, xb = rect.x_lo, rect.x_hi
            const = _analytic_midline_constant(f, xa, xb, s.right_dominant)
            for r in np.geomspace(10.0, 2000.0, 12):
                b = backlund_bound(f, complex(xb, r), complex(xa, r), 2 * (xb - xa))
                mid_max = max(mid_max, b.bound / const)
                if not (b.lhs <= b.bound + 1e-9 and b.bound <= const + 1e-9):
                    mid_bad.append((i, r, b.lhs, b.bound, const))
    ok = not violations and not mid_bad
    report(5, ok, f"1000 vertical segments with R = 2T ({skipped} skipped for zeros on the "
                  f"segment): max lhs - bound = {worst:.3f}; midline top-edge bounds stay under "
                  f"the r-independent constant (max ratio {mid_max:.6f}) for r in [10, 2000]; "
                  f"violations {violations + mid_bad}")


def test_criterion_6_oracle_equivalence():
    rng = np.random.default_rng(606)
    cases = [(commensurable_sum(rng, 12), False) for _ in range(200)]
    cases += [(commensurable_sum(rng, 12, double_root=True), True) for _ in range(12)]
    cases += [(ExpSum.from_pairs([(4, 0), (-4, 1), (1, 2)]), True)]
    bad = []
    doubles_seen = 0
    worst = 0.0
    for idx, (f, double) in enumerate(cases):
        y0 = float(rng.uniform(-40, 40))
        dec = decompose(f)
        got = find_all_zeros(f, y0, y0 + 4 * math.pi, decomposition=dec)
        want = oracle_zeros_commensurable(f, y0, y0 + 4 * math.pi, dec)
        if double and any(r.multiplicity == 2 for r in want):
            doubles_seen += 1
        same = len(got) == len(want) and not match_zeros(got, want, 1e-8)
        for b in want:
            worst = max(worst, min((abs(a.z - b.z) for a in got), default=math.inf))
        if not same:
            bad.append(idx)
    ok = not bad and doubles_seen >= 10
    report(6, ok, f"{len(cases)} commensurable sums (p_n <= 12), {doubles_seen} with double roots; "
                  f"max position gap {worst:.1e} (<= 1e-8); mismatching cases {bad}")


def test_criterion_7_real_part_closure():
    g = ExpSum.from_pairs([(1, 0), (1, 1), (1, math.sqrt(2))])
    a = real_part_closure(g, 1e3)
    b = real_part_closure(g, 2e3)
    f = ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)])
    c = real_part_closure(f, 1e3)
    d = real_part_closure(f, 2e3)
    lg = math.log(1.5)
    ok = b.max_gap < a.max_gap and abs(c.max_gap - lg) <= 1e-9 and abs(d.max_gap - lg) <= 1e-9
    report(7, ok, f"sqrt(2) sum: max gap {a.max_gap:.5f} -> {b.max_gap:.5f} (strict decrease); "
                  f"dependent sum: {c.max_gap:.12f}, {d.max_gap:.12f} (log 1.5 = {lg:.12f})")


def test_criterion_8_discs():
    f = ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)])
    H = 1e4
    tail_mod = 100.0
    rng = np.random.default_rng(88)
    r100 = float(disc_radius(tail_mod))
    lines = []
    while len(lines) < 200:
        c = float(rng.uniform(0.0, math.log(6)))
        if min(abs(c - math.log(2)), abs(c - math.log(3))) > r100:
            lines.append(c)
    t = time.perf_counter()
    res = disc_experiment(f, H, 0, tail_modulus=tail_mod, lines=lines, method="winding")
    elapsed = time.perf_counter() - t
    oracle = disc_experiment(f, H, 0, tail_modulus=tail_mod, lines=lines, method="oracle")
    mod = np.array(res.moduli)
    parts = np.array(res.partial_sums)
    cauchy = []
    for h in (100.0, 300.0, 1000.0, 3000.0):
        i = int(np.searchsorted(mod, h, side="right"))
        cauchy.append(bool(parts[-1] - parts[i - 1] <= tail_bound(f, h)))
    worst = max(res.tail_hits_per_line)
    ok = (all(cauchy) and np.all(np.diff(parts) > 0) and worst <= 5
          and res.zero_count == oracle.zero_count
          and res.tail_hits_per_line == oracle.tail_hits_per_line)
    report(8, ok, f"{res.zero_count} zeros up to |z| = 1e4 ({elapsed:.1f} s, oracle agrees), "
                  f"sum r_n = {res.radii_partial_sum:.4f}, tail bound {res.analytic_tail_bound:.4f}, "
                  f"Cauchy checks {cauchy}; 200 off-lattice lines meet at most {worst} discs "
                  f"beyond |z| = 100 (<= 5)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
