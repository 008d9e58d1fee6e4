"""Evaluate the digit-triple reference inequality under each index reading.

For every reading this prints the quantum value, the exact classical
minimum and whether an explicit classical model attaining that minimum
passes every model check.  ``--search`` additionally scans all
relabelings of states, effects and transformations for readings with
the expected quantum value (float prefilter, exact confirmation).
"""

import argparse
import json
from collections import Counter
from fractions import Fraction
from itertools import permutations
from pathlib import Path

from ncptm.fragment import STABILIZER_IDS, predict, stabilizer_qubit_fragment
from ncptm.model import build, verify
from ncptm.program import NcInequality, bound_point, program_for, table_from_solution

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "reference_inequality.json"


def tokens(doc):
    for weight, toks in doc["terms"].items():
        for tok in toks:
            sign = -1 if tok.startswith("-") else 1
            a, t, c = (int(ch) - 1 for ch in tok.lstrip("-"))
            yield sign * int(weight), a, t, c


def reading(doc, state_first, spos, kpos, tpos):
    labels, tids = doc["labels"], doc["transformations"]
    coeffs = {}
    for w, a, t, c in tokens(doc):
        s, k = (a, c) if state_first else (c, a)
        key = (labels[kpos[k]], labels[spos[s]], tids[tpos[t]])
        coeffs[key] = coeffs.get(key, 0) + w
    return NcInequality(coeffs, -Fraction(doc["bound"]))


def search(doc, data, skeleton):
    import numpy as np

    w, A, T, C = (np.array(v) for v in zip(*tokens(doc)))
    labels, tids = doc["labels"], doc["transformations"]
    P = np.zeros((6, 6, 4))
    for (k, s, t), v in data.entries.items():
        P[labels.index(k), labels.index(s), tids.index(t)] = float(v)
    perms = np.array(list(permutations(range(6))))
    target = float(Fraction(doc["quantum_value"]))
    bounds = Counter()
    for state_first in (True, False):
        S, K = (A, C) if state_first else (C, A)
        for tperm in permutations(range(4)):
            tp = np.array(tperm)[T]
            for sp in perms:
                vals = (P[:, sp[S], tp][perms[:, K], np.arange(len(w))] * w).sum(1)
                for i in np.nonzero(np.abs(vals - target) < 1e-9)[0]:
                    ineq = reading(doc, state_first, sp, perms[i], tperm)
                    assert ineq.lhs(data) == Fraction(doc["quantum_value"])
                    bounds[bound_point(ineq, skeleton)[0]] += 1
    return bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--search", action="store_true", help="scan all relabelings (several minutes)")
    args = ap.parse_args()

    doc = json.loads(FIXTURE.read_text())
    f = stabilizer_qubit_fragment()
    assert list(doc["labels"]) == list(STABILIZER_IDS)
    data = predict(f)
    ids, phi, psi, sk = program_for(f)
    ident = list(range(6))
    print(f"expected: beta = {doc['quantum_value']} on quantum data, classical bound {doc['bound']}")
    for state_first in (True, False):
        for tpos in ((0, 1, 2, 3), (0, 1, 3, 2)):
            ineq = reading(doc, state_first, ident, ident, tpos)
            value, x = bound_point(ineq, sk)
            table = table_from_solution(x, sk)
            m = build(x, phi, psi, f.N, sk.transformation_ids)
            ok = verify(m, f, table, ids)["passed"] and not table.violations(f.measurements)
            order = "state-first" if state_first else "effect-first"
            ts = [doc["transformations"][i] for i in tpos]
            print(f"{order:>12} t={ts}: beta = {ineq.lhs(data)}, classical min = {value}, "
                  f"minimizing model verified: {ok}")
    if args.search:
        bounds = search(doc, data, sk)
        print(f"relabelings with beta = {doc['quantum_value']}: {sum(bounds.values())}")
        for b, n in sorted(bounds.items()):
            print(f"  classical min {b}: {n}")


if __name__ == "__main__":
    main()
