"""Largest gap between sorted zero real parts as the height window grows."""

import argparse
import math

from expsum import ExpSum
from expsum.density import real_part_closure


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizons", default="250,500,1000,2000")
    args = ap.parse_args(argv)
    sums = {
        "1 + e^z + e^{sqrt2 z}": ExpSum.from_pairs([(1, 0), (1, 1), (1, math.sqrt(2))]),
        "6 - 5e^z + e^{2z}": ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)]),
    }
    for name, f in sums.items():
        print(f"== {name}")
        for h in (float(v) for v in args.horizons.split(",")):
            res = real_part_closure(f, h)
            print(f"  |Im z| < {h:6g}: {len(res.real_parts):5d} zeros, Re in "
                  f"[{res.min:+.6f}, {res.max:+.6f}], max gap {res.max_gap:.6f}")


if __name__ == "__main__":
    main()
