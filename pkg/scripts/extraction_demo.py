"""Extract induced cographs from random and structured graphs and print the
size, the (1/2) log2 n floor, the branch taken at the top level and runtime."""

import argparse
import time
from fractions import Fraction
from math import ceil, log2

from vcramsey.families import blow_up, interval_incidence, random_cograph, threshold_graph
from vcramsey.randgen import sample_gnp
from vcramsey.ramsey import extract_cograph


def c5_blow_up(n):
    pattern = [[abs(i - j) in (1, 4) for j in range(5)] for i in range(5)]
    return blow_up(pattern, [n // 5 + (i < n % 5) for i in range(5)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[512, 4096])
    ap.add_argument("--c", type=Fraction, default=Fraction(1, 100))
    args = ap.parse_args()

    makers = {
        "gnp(1/2)": lambda n: sample_gnp(n, 0.5, seed=1),
        "threshold": lambda n: threshold_graph(n, 3, seed=1),
        "incidence": lambda n: interval_incidence(n, 4, 5, seed=1),
        "cograph": lambda n: random_cograph(n, seed=1),
        "C5 blow-up": c5_blow_up,
    }
    print("graph\tn\tsize\tfloor\tbranch\tlevels\tseconds")
    for name, make in makers.items():
        for n in args.n:
            g = make(n)
            start = time.perf_counter()
            vs, trace = extract_cograph(g, c=args.c)
            took = time.perf_counter() - start
            top = trace.levels[0]
            print(f"{name}\t{n}\t{len(vs)}\t{ceil(0.5 * log2(n))}\t{top['branch']}\t{len(trace.levels)}\t{took:.2f}")


if __name__ == "__main__":
    main()
