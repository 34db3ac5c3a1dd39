"""Closed-form design parameters against lambda = b k (k-1) / (v (v-1)),
with b taken from the weight table, across regimes and characteristics."""

import argparse

from cyclodesign.code import code_spec
from cyclodesign.designs import closed_form_checks

DEFAULT = ["3,2,4", "3,3,6", "3,2,6", "3,3,9", "3,2,8", "5,2,4", "5,3,9", "3,2,12", "3,4,8",
           "5,2,8", "3,3,12", "7,2,6", "3,2,10"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("specs", nargs="*", default=DEFAULT, help="p,l,m triples")
    args = ap.parse_args()
    mismatches = 0
    for item in args.specs:
        p, l, m = map(int, item.split(","))
        spec = code_spec(p, l, m)
        print(f"(p,l,m)=({p},{l},{m}) regime={spec.regime.value}")
        for c in closed_form_checks(spec):
            mismatches += not c.agrees
            mark = "ok" if c.agrees else "MISMATCH"
            print(f"  k={c.weight:>8}  b={c.b:>14}  lambda={c.from_counts:>16}  printed={str(c.printed):>16}  {mark}")
    print(f"{mismatches} mismatches")


if __name__ == "__main__":
    main()
