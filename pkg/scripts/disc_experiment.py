"""Disc-avoidance experiment for 6 - 5e^z + e^{2z}.

Prints partial sums of the disc radii against the analytic tail bound and
the number of discs met by vertical lines on and off the two zero lines.
"""

import argparse
import math

import numpy as np

from expsum import ExpSum
from expsum.density import disc_experiment, tail_bound


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=float, default=1e4)
    ap.add_argument("--lines", type=int, default=100)
    ap.add_argument("--method", choices=["auto", "winding", "oracle"], default="auto")
    args = ap.parse_args(argv)

    f = ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)])
    special = (math.log(2), math.log(3), 0.5 * (math.log(2) + math.log(3)))
    res = disc_experiment(f, args.horizon, args.lines, lines=special, method=args.method,
                          tail_modulus=100.0)
    mod = np.array(res.moduli)
    parts = np.array(res.partial_sums)
    print(f"{res.zero_count} zeros with |z| <= {args.horizon:g}; sum r_n = {res.radii_partial_sum:.6f}")
    print(f"{'H':>8} {'S(H)':>10} {'S(end)-S(H)':>12} {'tail(H)':>10}")
    for h in np.geomspace(10, args.horizon, 7)[:-1]:
        i = int(np.searchsorted(mod, h, side="right"))
        print(f"{h:8.0f} {parts[i - 1]:10.6f} {parts[-1] - parts[i - 1]:12.6f} {tail_bound(f, h):10.6f}")
    hits = dict(zip(res.line_abscissas, res.tail_hits_per_line))
    for c, label in zip(special, ("log 2", "log 3", "midpoint")):
        print(f"line Re z = {label:8s}: {hits[c]} discs beyond |z| = 100")
    sampled = res.tail_hits_per_line[:args.lines]
    print(f"{args.lines} random lines: max {max(sampled, default=0)} discs beyond |z| = 100; "
          f"{res.lines_hitting_infinitely} of all {res.lines_tested} lines still meet a disc "
          f"in the last decade of modulus")


if __name__ == "__main__":
    main()
