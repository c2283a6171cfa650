"""Boundary maps with irrational rotation: Ulam density against the (a/b)^4 bounds.

Also reports max |m_n - n rho| over a grid of start points.
"""
import argparse

import numpy as np

from lorenz_acim.classifier import classify, density_bounds
from lorenz_acim.core_map import validate
from lorenz_acim.density import ulam_matrix, ulam_stationary
from lorenz_acim.rotation import max_visit_deviation, rotation_number_homeo

MAPS = [("2", "1/3", "2/5"), ("3/2", "1/2", "1/2"), ("3", "1/2", "1/5"), ("5/4", "3/4", "1/2")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", type=int, default=4096)
    ap.add_argument("--steps", type=int, default=100_000)
    args = ap.parse_args()
    print(f"{'map':>18} {'class':>24} {'r':>9} {'min':>7} {'max':>7} {'1/r':>9} {'dev':>6}")
    for a, b, c in MAPS:
        p = validate(a, b, c)
        r, r_inv = density_bounds(p)
        g = ulam_stationary(ulam_matrix(p.to_float(), args.cells))
        dev = max_visit_deviation(p, np.linspace(0, 1, 11), args.steps, rotation_number_homeo(p))
        print(
            f"{str((a, b, c)):>18} {classify(p).kind:>24} {float(r):9.2e} "
            f"{min(g.values):7.3f} {max(g.values):7.3f} {float(r_inv):9.2e} {dev:6.2f}"
        )


if __name__ == "__main__":
    main()
