"""Largest |S| on the minor-arc grid points against X^(1 - 3 delta0) (log X)^4.

Informational only: the comparison is an asymptotic statement and at desk
sizes the reference curve is far above the observed supremum.
"""
import argparse
import math

import numpy as np

from restricted_goldbach.circle import build_grid, build_partition
from restricted_goldbach.primes import build_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--X", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    ap.add_argument("--delta0", type=float, default=0.05)
    args = ap.parse_args()

    print("X,P,Q,N,minor_points,sup_minor_S,S0,reference,sup_over_reference")
    for X in args.X:
        table = build_table(X, args.delta0)
        grid = build_grid(table)
        part = build_partition(X, args.delta0)
        minor = ~part.grid_mask(grid.N)
        sup = float(np.abs(grid.S_values[minor]).max()) if minor.any() else 0.0
        ref = X ** (1 - 3 * args.delta0) * math.log(X) ** 4
        print(
            f"{X},{table.P},{part.Q},{grid.N},{int(minor.sum())},{sup:.6g},"
            f"{table.weight_sum:.6g},{ref:.6g},{sup / ref:.3e}"
        )


if __name__ == "__main__":
    main()
