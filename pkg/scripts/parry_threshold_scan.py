"""Equivalence verdict across the symmetric family f_{a,a,1/2}.

Writes one row per slope with kappa, the verdict and the smallest Ulam
cell value, so the switch at a = sqrt(2) is visible in both columns.
"""
import argparse
import csv
import math
import sys

from lorenz_acim.core_map import validate
from lorenz_acim.density import CSV_HEADER, ulam_matrix, ulam_stationary
from lorenz_acim.periodic import equivalence_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=1.02)
    ap.add_argument("--hi", type=float, default=2.0)
    ap.add_argument("--step", type=float, default=0.02)
    ap.add_argument("--cells", type=int, default=1024)
    ap.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    args.out.write(CSV_HEADER + "\n")
    w = csv.writer(args.out, lineterminator="\n")
    w.writerow(["a", "kappa", "equivalent", "ulam_min", "below_sqrt2"])
    n = int(math.floor((args.hi - args.lo) / args.step + 1e-9)) + 1
    for i in range(n):
        a = round(args.lo + i * args.step, 10)
        p = validate(a, a, 0.5)
        v = equivalence_check(p)
        g = ulam_stationary(ulam_matrix(p, args.cells))
        w.writerow([a, getattr(v, "kappa", ""), v.equivalent, f"{min(g.values):.3e}", a < math.sqrt(2)])


if __name__ == "__main__":
    main()
