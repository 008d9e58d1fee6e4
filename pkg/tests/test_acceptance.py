"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) and
enforces its runtime limit.  Run this file directly to print the lines
without pytest.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from ncptm.elimination import canonical_set, eliminate, system_for, to_original
from ncptm.fragment import (
    PAULI_TRANSFER,
    DataTable,
    lump,
    predict,
    stabilizer_qubit_fragment,
)
from ncptm.identities import all_identities, transformation_identities
from ncptm.linalg import in_row_span, vecmat, dot
from ncptm.model import build, verify
from ncptm.polytopes import enumerate_vertices, measurement_polytope, source_polytope
from ncptm.program import (
    NcInequality,
    build_program,
    certify,
    nc_bound,
    program_for,
)
from ncptm.robustness import robustness
from ncptm.sampling import sample_tables

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

DATA = Path(__file__).parent / "data"
STAB_GENERATORS = [(1, 1, -1, -1, 0, 0), (1, 1, 0, 0, -1, -1)]


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:2d}: {status}  {title} ({elapsed:.1f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def same_span(vectors, expected) -> bool:
    return (len(vectors) == len(expected)
            and all(in_row_span(expected, v) for v in vectors)
            and all(in_row_span(vectors, e) for e in expected))


def test_01_identity_recovery():
    with criterion(1, "operational identities of the stabilizer fragment", 1.0):
        f = stabilizer_qubit_fragment()
        ids = all_identities(f)
        t = ids["transformations"]
        assert list(t.process_ids) == ["I", "Z", "S", "Sinv"]
        assert len(t.generators) == 1
        assert in_row_span([(1, 1, -1, -1)], t.generators[0])
        assert same_span(ids["states"].generators, STAB_GENERATORS)
        assert same_span(ids["effects"].generators, STAB_GENERATORS)


def test_02_vertex_counts():
    with criterion(2, "assignment polytope vertices", 5.0):
        f = stabilizer_qubit_fragment()
        ids = all_identities(f)
        phi = enumerate_vertices(measurement_polytope(f, ids["effects"]))
        psi = enumerate_vertices(source_polytope(f, ids["states"]))
        assert len(phi) == 8 and len(psi) == 8
        deterministic = set()
        for v in phi.vertices:
            assert all(x in (0, 1) for x in v)
            for a, b in ((0, 1), (2, 3), (4, 5)):
                assert v[a] + v[b] == 1
            deterministic.add(v)
        assert len(deterministic) == 8
        assert {tuple(x * 3 for x in v) for v in psi.vertices} == deterministic


def test_03_program_shape():
    with criterion(3, "program is 260 x 256", 5.0):
        f = stabilizer_qubit_fragment()
        ids = all_identities(f)
        phi = enumerate_vertices(measurement_polytope(f, ids["effects"]))
        psi = enumerate_vertices(source_polytope(f, ids["states"]))
        p = build_program(phi, psi, ids["transformations"], predict(f), f.N)
        assert p.shape == (260, 256)
        counts = {}
        for tag in p.row_tags:
            counts[tag[0]] = counts.get(tag[0], 0) + 1
        assert counts == {"normalization": 4, "causal": 48, "transformation-identity": 64,
                          "data": 144}


def test_04_nonclassicality_verdict():
    with criterion(4, "quantum stabilizer data is infeasible with an exact witness", 60.0):
        f = stabilizer_qubit_fragment()
        _, _, _, p = program_for(f, predict(f))
        r = certify(p)
        assert r.verdict == "infeasible"
        ym = vecmat(r.witness, p.M)
        assert all(0 <= v <= 1 for v in ym)
        assert dot(r.witness, p.b) < 0


def reference_readings():
    """Every reading of the digit-triple fixture: outer-digit order x S/Sinv order."""
    doc = json.loads((DATA / "reference_inequality.json").read_text())
    labels, tids = doc["labels"], doc["transformations"]
    swapped = [tids[0], tids[1], tids[3], tids[2]]
    out = {}
    for outer in ("state-first", "effect-first"):
        for torder in (tids, swapped):
            coeffs = {}
            for weight, tokens in doc["terms"].items():
                for tok in tokens:
                    sign = -1 if tok.startswith("-") else 1
                    a, t, c = (int(ch) - 1 for ch in tok.lstrip("-"))
                    s, k = (a, c) if outer == "state-first" else (c, a)
                    key = (labels[k], labels[s], torder[t])
                    coeffs[key] = coeffs.get(key, 0) + sign * int(weight)
            out[(outer, tuple(torder))] = NcInequality(coeffs, -Fraction(doc["bound"]))
    return out, Fraction(doc["quantum_value"]), Fraction(doc["bound"])


def test_05_reference_inequality():
    with criterion(5, "reference inequality: beta = -12 on quantum data, bound -6", 120.0):
        f = stabilizer_qubit_fragment()
        _, _, _, skeleton = program_for(f)
        quantum = predict(f)
        readings, beta_expected, bound_expected = reference_readings()
        results = {}
        for name, ineq in readings.items():
            beta = ineq.lhs(quantum)
            bound = nc_bound(ineq, skeleton)
            results[name] = (beta, bound)
        matches = [n for n, (b, lo) in results.items() if b == beta_expected and lo == bound_expected]
        assert matches, f"no reading gives beta={beta_expected} with bound={bound_expected}: {results}"


def test_06_classical_case():
    with criterion(6, "depolarized data is classical; model passes every check", 60.0):
        f = stabilizer_qubit_fragment()
        data = DataTable.constant(f, Fraction(1, 2))
        ids, phi, psi, p = program_for(f, data)
        r = certify(p)
        assert r.feasible and r.check(p)
        m = build(r.x, phi, psi, f.N, p.transformation_ids)
        report = verify(m, f, data, ids)
        assert [c["passed"] for c in report["checks"]] == [True] * 5
        assert report["passed"]


def test_07_oracle_equivalence():
    with criterion(7, "eliminated inequalities agree with certify on 120 tables", 300.0):
        from ncptm.fragment import square_fragment

        f = square_fragment()
        _, _, _, skeleton = program_for(f)
        res = eliminate(system_for(f))
        tables = sample_tables(f, skeleton, 120, seed=2024)
        verdicts = []
        for t in tables:
            lp = certify(skeleton.with_data(t)).feasible
            assert res.holds(t) == lp
            verdicts.append(lp)
        assert any(verdicts) and not all(verdicts)


def test_08_flag_scaling():
    with criterion(8, "flag-convexified inequalities map to the original ones", 300.0):
        from ncptm.fragment import square_fragment

        f = square_fragment()
        flag = eliminate(system_for(f, flag=True)).all_inequalities()
        orig = eliminate(system_for(f)).all_inequalities()
        assert canonical_set(to_original(flag, f.N)) == canonical_set(orig)


def test_09_robustness_bracket():
    with criterion(9, "robustness bracket of width <= 1/1024", 600.0):
        f = stabilizer_qubit_fragment()
        _, _, _, skeleton = program_for(f)
        quantum = predict(f)
        target = DataTable.constant(f, Fraction(1, 2))
        res = robustness(skeleton, quantum, target, Fraction(1, 1024))
        assert res.width <= Fraction(1, 1024)
        assert not certify(skeleton.with_data(quantum.mix(target, res.r_lo))).feasible
        assert certify(skeleton.with_data(quantum.mix(target, res.r_hi))).feasible
        assert res.interval_property_holds()


def test_10_lumping():
    with criterion(10, "lumped transformations carry the identity and stay nonclassical", 60.0):
        base = stabilizer_qubit_fragment()
        P = PAULI_TRANSFER
        res = lump([("I", P["I"]), ("Z", P["Z"])], [("I", P["I"]), ("S", P["S"])], base)
        f = res.fragment
        frozen = lambda m: tuple(map(tuple, m))  # noqa: E731
        mats = [frozen(m) for _, m in f.transformations]
        assert len(mats) == 4
        assert set(mats) == {frozen(P[t]) for t in ("I", "Z", "S", "Sinv")}
        assert mats[3] == frozen(P["Sinv"])
        gens = transformation_identities(f).generators
        assert len(gens) == 1 and in_row_span([(1, 1, -1, -1)], gens[0])
        _, _, _, p = program_for(f, predict(f))
        assert certify(p).verdict == "infeasible"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
