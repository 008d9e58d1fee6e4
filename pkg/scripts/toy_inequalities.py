"""Enumerate every noncontextuality inequality of the square-gbit toy scenario."""

import argparse
import time

from ncptm.elimination import canonical_set, eliminate, system_for, to_original
from ncptm.fragment import square_fragment
from ncptm.linalg import format_rational
from ncptm.program import certify, program_for
from ncptm.sampling import sample_tables


def show(ineq, rel=">="):
    lhs = " ".join(f"{'+' if g > 0 else '-'}{'' if abs(g) == 1 else format_rational(abs(g))}"
                   f"p({k}|{s},{t})" for (k, s, t), g in sorted(ineq.coeffs.items()))
    return f"{lhs} {rel} {format_rational(-ineq.constant)}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    f = square_fragment()
    start = time.perf_counter()
    res = eliminate(system_for(f))
    print(f"{len(res.inequalities)} inequalities, {len(res.equalities)} equalities "
          f"({res.generated} rows generated, {time.perf_counter() - start:.1f}s)")
    for e in res.equalities:
        print("  " + show(e, "="))
    for i in res.inequalities:
        print("  " + show(i))

    flag = eliminate(system_for(f, flag=True))
    same = canonical_set(to_original(flag.all_inequalities(), f.N)) == canonical_set(res.all_inequalities())
    print(f"flag-convexified system maps onto the same set: {same}")

    _, _, _, sk = program_for(f)
    tables = sample_tables(f, sk, args.samples, seed=args.seed)
    verdicts = [certify(sk.with_data(t)).feasible for t in tables]
    agree = sum(res.holds(t) == v for t, v in zip(tables, verdicts))
    print(f"agreement with certify: {agree}/{len(tables)} "
          f"({sum(verdicts)} classical, {len(tables) - sum(verdicts)} not)")


if __name__ == "__main__":
    main()
