"""Certify the single-qubit stabilizer table and print the witness inequality."""

import argparse
import time

from ncptm.fragment import predict, stabilizer_qubit_fragment
from ncptm.linalg import format_rational
from ncptm.program import certify, nc_bound, program_for, witness_to_inequality


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scale", type=int, default=6, help="positive factor applied to the printed inequality")
    args = ap.parse_args()

    f = stabilizer_qubit_fragment()
    data = predict(f)
    start = time.perf_counter()
    _, _, _, prog = program_for(f, data)
    r = certify(prog)
    print(f"program {prog.shape[0]}x{prog.shape[1]}: {r.verdict} "
          f"({r.pivots} pivots, {time.perf_counter() - start:.1f}s)")
    if r.feasible:
        return
    ineq = witness_to_inequality(r, prog)
    bound = nc_bound(ineq, prog)
    k = args.scale
    print(f"y.b = {format_rational(r.witness_value)}")
    terms = sorted(ineq.coeffs.items(), key=lambda kv: (-abs(kv[1]), kv[0]))
    print(f"beta := sum of {len(terms)} terms (scaled by {k}):")
    for (e, s, t), g in terms:
        print(f"  {format_rational(g * k):>4} * p({e} | {s}, {t})")
    print(f"quantum beta = {format_rational(ineq.lhs(data) * k)}, "
          f"classical bound beta >= {format_rational(bound * k)}")


if __name__ == "__main__":
    main()
