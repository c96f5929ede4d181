"""Table of b * max_n u(n) / |D|^2s over s for a few digit systems.

The ratio falls to 1 exactly when the digit differences and b are coprime;
otherwise it settles at the number of residues a with all d*a/b congruent.
"""
import argparse
import math
from functools import reduce

from restricted_goldbach.cli import parse_digits
from restricted_goldbach.digitset import DigitSystem
from restricted_goldbach.expsum import u_max_ratio

DEFAULT = ["10:0-9", "10:0,1", "10:1,3", "10:2,8", "10:1,2,8", "3:0,1", "7:0,3,5", "12:0,1"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("systems", nargs="*", default=DEFAULT, help="base:digits, e.g. 10:1,3")
    ap.add_argument("--s", type=int, nargs="+", default=[1, 2, 3, 5, 10, 20, 50])
    args = ap.parse_args()

    print("base,digits,diff_gcd," + ",".join(f"s={s}" for s in args.s))
    for item in args.systems:
        b, spec = item.split(":")
        system = DigitSystem(int(b), tuple(parse_digits(spec)))
        g = reduce(math.gcd, [d - system.digits[0] for d in system.digits] + [system.base])
        ratios = ",".join(f"{u_max_ratio(system, s):.6f}" for s in args.s)
        print(f'{system.base},"{spec}",{g},{ratios}')


if __name__ == "__main__":
    main()
