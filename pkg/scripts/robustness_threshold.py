"""Bisect the depolarizing weight at which stabilizer data becomes classical."""

import argparse
import time
from fractions import Fraction

from ncptm.fragment import DataTable, predict, stabilizer_qubit_fragment
from ncptm.linalg import parse_rational
from ncptm.program import program_for
from ncptm.robustness import robustness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=parse_rational, default=Fraction(1, 1024))
    args = ap.parse_args()

    f = stabilizer_qubit_fragment()
    _, _, _, sk = program_for(f)
    start = time.perf_counter()
    res = robustness(sk, predict(f), DataTable.constant(f, Fraction(1, 2)), args.precision)
    for r, ok in res.probes:
        print(f"  r = {str(r):>10}  {'classical' if ok else 'nonclassical'}")
    print(f"threshold in ({res.r_lo}, {res.r_hi}] after {len(res.probes)} exact solves "
          f"({time.perf_counter() - start:.1f}s); interval property: {res.interval_property_holds()}")


if __name__ == "__main__":
    main()
