"""Run the ultra-strong partition on the structured families and tabulate
K, |S|, the non-homogeneous fraction and runtime."""

import argparse
import time
from fractions import Fraction

from vcramsey.core import Refusal
from vcramsey.families import clique_union, interval_incidence, threshold_graph
from vcramsey.regularity import ultra_strong_partition
from vcramsey.vc import graph_vc_search

FAMILIES = {
    "threshold": lambda n: threshold_graph(n, 3, seed=1),
    "incidence": lambda n: interval_incidence(n, 3, 4, seed=1),
    "cliques": lambda n: clique_union(n, 4, seed=1),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2000, 5000])
    ap.add_argument("--inverse-eps", type=int, nargs="+", default=[10, 16])
    ap.add_argument("--clamp", action="store_true", help="clamp K to n instead of refusing")
    args = ap.parse_args()

    print("family\tn\teps\tvc\tK\t|S|\tfraction\tseconds")
    for name, make in FAMILIES.items():
        for n in args.n:
            g = make(n)
            d = graph_vc_search(g).dimension
            for q in args.inverse_eps:
                eps = Fraction(1, q)
                start = time.perf_counter()
                try:
                    p, report, packing = ultra_strong_partition(g, eps, clamp=args.clamp)
                except Refusal as exc:
                    print(f"{name}\t{n}\t{eps}\t{d}\trefused: {exc}")
                    continue
                took = time.perf_counter() - start
                print(f"{name}\t{n}\t{eps}\t{d}\t{p.K}\t{len(packing.centers)}\t{report.fraction}\t{took:.2f}")


if __name__ == "__main__":
    main()
