"""Decompositions, counts and zeros for 1 + e^z + e^{2z} and 6 - 5e^z + e^{2z}."""

import math

from expsum import ExpSum, Rectangle, count_zeros, decompose, find_all_zeros

EXAMPLES = {
    "1 + e^z + e^{2z}": ExpSum.from_pairs([(1, 0), (1, 1), (1, 2)]),
    "6 - 5e^z + e^{2z}": ExpSum.from_pairs([(6, 0), (-5, 1), (1, 2)]),
    "1 + e^z + e^{sqrt2 z}": ExpSum.from_pairs([(1, 0), (1, 1), (1, math.sqrt(2))]),
}


def main():
    for name, g in EXAMPLES.items():
        dec = decompose(g)
        print(f"== {name}")
        for r in dec.regions:
            print(f"  zero-free ({r.x_lo:+.12f}, {r.x_hi:+.12f})  dominant term {r.dominant}")
        for s in dec.strips:
            print(f"  strip     [{s.x_lo:+.12f}, {s.x_hi:+.12f}]  Lambda({s.left_dominant},{s.right_dominant})")
        x0, x1 = dec.span
        res = count_zeros(g, Rectangle(x0 - 1, x1 + 1, 0.0, 2 * math.pi))
        print(f"  zeros with 0 <= Im z < 2 pi: {res.count}")
        for rec in find_all_zeros(g, 0.0, 2 * math.pi):
            print(f"    {rec.z.real:+.12f} {rec.z.imag:+.12f}i  x{rec.multiplicity}  strip {rec.strip_index}")


if __name__ == "__main__":
    main()
