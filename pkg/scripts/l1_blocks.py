"""Exact L1 norms of the triangular Fejer kernel, maximised over dyadic blocks of n.

Prints one CSV row per block [2^k, 2^(k+1)] with the block maximum and its
ratio to the previous block, which shows the slow growth of the norm.
"""

import argparse
import csv
import sys

from walshtri.lemmas.maximal import MAX_TRI_N, tri_kernel_l1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=MAX_TRI_N)
    args = ap.parse_args(argv)
    norms = {n: tri_kernel_l1(n) for n in range(2, args.n_max + 1)}
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["lo", "hi", "argmax", "max_num", "max_den", "max_decimal", "ratio_to_previous"])
    prev = None
    lo = 2
    while lo < args.n_max:
        hi = min(2 * lo, args.n_max)
        arg = max(range(lo, hi + 1), key=norms.__getitem__)
        top = norms[arg]
        w.writerow([lo, hi, arg, top.numerator, top.denominator, f"{float(top):.6f}",
                    "" if prev is None else f"{float(top / prev):.6f}"])
        prev, lo = top, hi


if __name__ == "__main__":
    main()
