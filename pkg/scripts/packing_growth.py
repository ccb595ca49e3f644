"""Size of the greedy delta-separated packing as epsilon shrinks.

Prints |S| per epsilon and the least-squares exponent of |S| against 1/eps,
next to the 2d+1 ceiling for the measured VC-dimension d.
"""

import argparse
from fractions import Fraction

import numpy as np

from vcramsey.families import chain_graph, interval_incidence, threshold_graph
from vcramsey.regularity import greedy_packing, separation_delta
from vcramsey.vc import graph_vc_search

FAMILIES = {
    "chain": lambda n, seed: chain_graph(n, seed),
    "threshold": lambda n, seed: threshold_graph(n, 3, seed),
    "incidence": lambda n, seed: interval_incidence(n, 6, 8, seed),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=FAMILIES, default="chain")
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--inverse-eps", type=int, nargs="+", default=[5, 6, 8, 10, 12, 16, 20])
    args = ap.parse_args()

    g = FAMILIES[args.family](args.n, args.seed)
    d = graph_vc_search(g).dimension
    print(f"{args.family} n={g.n} vc={d}")
    print("eps\tdelta\t|S|")
    sizes = []
    for q in args.inverse_eps:
        eps = Fraction(1, q)
        delta = separation_delta(g.n, 2, eps)
        s = len(greedy_packing(g, delta).centers)
        sizes.append(s)
        print(f"{eps}\t{float(delta):.3f}\t{s}")
    slope = np.polyfit(np.log(args.inverse_eps), np.log(sizes), 1)[0]
    print(f"fitted exponent {slope:.3f} (ceiling 2d+1 = {2 * d + 1})")


if __name__ == "__main__":
    main()
