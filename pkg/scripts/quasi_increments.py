"""Outside-integral ratios of the truncated triangular maximal operator.

For seeded mean-zero functions on I_a x I_a, prints the ratio to ||f||_1 at
N = 2^(a+1), 2^(a+2), ... and whether the increments shrink monotonically.
"""

import argparse
import csv
import sys

from walshtri.lemmas.experiments import quasi_locality_check
from walshtri.summation import random_function


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--resolution", type=int, default=5)
    ap.add_argument("--N", type=int, default=256)
    ap.add_argument("--functions", type=int, default=10)
    args = ap.parse_args(argv)
    marks = [1 << k for k in range(args.N.bit_length()) if 1 << k <= args.N]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["a", "seed", "ratios", "increments", "monotone", "shrinking"])
    for a in args.a:
        for seed in range(args.functions):
            f = random_function(seed, args.resolution, mean_zero=True, support=a).grid
            t = quasi_locality_check(f, a, args.N, checkpoints=marks)[-1]
            w.writerow([a, seed, " ".join(f"{float(r):.6f}" for r in t.extra["ratios"]),
                        " ".join(f"{float(d):.6f}" for d in t.extra["increments"]),
                        t.extra["monotone"], t.extra["shrinking"]])


if __name__ == "__main__":
    main()
