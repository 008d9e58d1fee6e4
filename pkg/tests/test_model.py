from fractions import Fraction

import pytest

from ncptm.identities import all_identities
from ncptm.model import ModelError, OntModel, build, verify
from ncptm.program import certify, program_for


@pytest.fixture(scope="module")
def uniform_model(stab_program):
    _, phi, psi, sk = stab_program
    x = [Fraction(1, 64)] * 256
    return build(x, phi, psi, 6, sk.transformation_ids)


def checks(report):
    return {c["check"]: c["passed"] for c in report["checks"]}


def test_uniform_product_model(uniform_model, stab, stab_depolarized):
    m = uniform_model
    assert m.ontic_in == list(range(8))
    for s in stab.state_ids:
        support = [m.mu[(s, k)] for k in m.ontic_in if m.mu[(s, k)]]
        assert support == [Fraction(1, 4)] * 4
    assert set(m.xi.values()) == {0, 1}
    report = verify(m, stab, stab_depolarized, all_identities(stab))
    assert report["passed"]
    assert report["flags"] == ["diagram-preservation not verified"]


def test_certified_model_round_trip(stab, stab_program, stab_depolarized):
    ids, phi, psi, sk = stab_program
    r = certify(sk.with_data(stab_depolarized))
    m = build(r.x, phi, psi, stab.N, sk.transformation_ids)
    assert all(checks(verify(m, stab, stab_depolarized, ids)).values())
    # marginal consistency
    for k in m.ontic_in:
        assert sum(m.mu[(s, k)] for s in stab.state_ids) / stab.N == m.p_kappa[k]
    assert build(r.x, phi, psi, stab.N, sk.transformation_ids) == m
    assert OntModel.from_dict(m.to_dict()) == m


def test_zero_mass_states_are_dropped(stab_program):
    _, phi, psi, sk = stab_program
    x = [Fraction(0)] * 256
    for j, (kp, k, t) in enumerate(sk.col_index):
        if kp == 0 and k == 0:
            x[j] = Fraction(1)
    m = build(x, phi, psi, 6, sk.transformation_ids)
    assert m.ontic_in == [0]


def test_corrupted_mu_is_caught(uniform_model, stab, stab_depolarized):
    m = OntModel.from_dict(uniform_model.to_dict())
    key = next(k for k, v in m.mu.items() if v)
    m.mu[key] += Fraction(1, 100)
    c = checks(verify(m, stab, stab_depolarized, all_identities(stab)))
    assert not c["data-reproduction"] and not c["distributions"]


def test_transformation_dependent_marginal_is_an_error(stab_program):
    _, phi, psi, sk = stab_program
    x = [Fraction(0)] * 256
    for j, (kp, k, t) in enumerate(sk.col_index):
        if kp == 0 and k == (0 if t == "I" else 1):
            x[j] = Fraction(1)
    with pytest.raises(ModelError):
        build(x, phi, psi, 6, sk.transformation_ids)
    with pytest.raises(ModelError):
        build(x[:-1], phi, psi, 6, sk.transformation_ids)


def test_identity_not_represented_by_identity(toy, toy_program):
    # a feasible model need not map each ontic state to itself under R0
    from ncptm.sampling import classical_table
    import random

    ids, phi, psi, sk = toy_program
    table = classical_table(sk, random.Random(3))
    r = certify(sk.with_data(table))
    m = build(r.x, phi, psi, toy.N, sk.transformation_ids)
    report = verify(m, toy, table, ids)
    assert all(checks(report).values())
    assert "diagram-preservation not verified" in report["flags"]
