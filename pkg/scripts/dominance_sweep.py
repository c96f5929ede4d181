"""Major-arc dominance across digit sets and sizes.

For each (digits, k) the arc pipeline is run at the default delta0 and the
fraction of even members with r(n, major) > |r(n, minor)| is printed.

    python scripts/dominance_sweep.py --k 3 4 5 --digits 0-9 0,2,4,6,8 2,8
"""
import argparse
import time

from restricted_goldbach.circle import build_grid, build_partition, dominance_report
from restricted_goldbach.cli import parse_digits
from restricted_goldbach.digitset import RestrictedSet
from restricted_goldbach.primes import build_table, cutoff_for


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--base", type=int, default=10)
    ap.add_argument("--digits", nargs="+", default=["0-9", "0,2,4,6,8", "2,8", "1,2,8"])
    ap.add_argument("--k", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--delta0", type=float, default=0.05)
    ap.add_argument("--Y", type=float, default=1.0)
    args = ap.parse_args()

    print("digits,k,X,P,Q,evens,major_positive,major_dominates,below_threshold,seconds")
    for k in args.k:
        X = args.base**k
        t0 = time.perf_counter()
        table = build_table(X, cutoff=cutoff_for(X, args.delta0))
        grid = build_grid(table)
        part = build_partition(X, args.delta0)
        for spec in args.digits:
            rs = RestrictedSet.of(args.base, parse_digits(spec), k)
            rows = dominance_report(rs, grid, part, table, args.Y)
            n = max(len(rows), 1)
            print(
                f'"{spec}",{k},{X},{table.P},{part.Q},{len(rows)},'
                f"{sum(r.major_positive for r in rows) / n:.4f},"
                f"{sum(r.major_dominates for r in rows) / n:.4f},"
                f"{sum(r.below_threshold for r in rows) / n:.4f},"
                f"{time.perf_counter() - t0:.2f}"
            )


if __name__ == "__main__":
    main()
