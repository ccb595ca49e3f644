"""Grid search over the local-lemma constants for K_s-free graphs of
bounded VC-dimension, optionally rescaling the edge probability."""

import argparse
from fractions import Fraction

import mpmath

from vcramsey.randgen import grid_search, lll_feasibility, scaled_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**12)
    ap.add_argument("--s", type=int, default=3)
    ap.add_argument("--d", type=int, default=6)
    ap.add_argument("--p-scale", type=Fraction, default=Fraction(1))
    args = ap.parse_args()

    grid = {
        "c1": [1, 2, 4, 8, 16, 32],
        "c2": [Fraction(7, 50), Fraction(1, 2), 1, 2, 4, 8],
        "c3": [Fraction(1, 4), Fraction(1, 2), 1, 2, 4, 8, 16],
        "c4": [Fraction(1, 2), 1, 2, 4],
    }
    found, rows = grid_search(args.n, args.s, args.d, grid, p_scale=args.p_scale)
    tally = {}
    for r in rows:
        key = r["status"] if r["status"] != "fail" else "fail " + "".join("1" if h else "0" for h in r["holds"])
        tally[key] = tally.get(key, 0) + 1
    print(f"n={args.n} s={args.s} d={args.d} p_scale={args.p_scale}: {len(rows)} tuples")
    for key, count in sorted(tally.items()):
        print(f"  {key}: {count}")
    if found is None:
        print("no passing tuple")
        return
    print(f"first passing tuple {found}")
    for n in (args.n, 10):
        v = lll_feasibility(scaled_instance(n, args.s, args.d, **found, p_scale=args.p_scale))
        print(f"  n={n}: holds={v.holds} margins={[mpmath.nstr(m, 6) for m in v.margins]}")


if __name__ == "__main__":
    main()
