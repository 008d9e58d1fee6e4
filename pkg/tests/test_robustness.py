import random
from fractions import Fraction

import pytest

from ncptm.fragment import DataTable, ScenarioError
from ncptm.robustness import RobustnessResult, robustness
from ncptm.program import certify
from ncptm.sampling import classical_table, gpt_table


@pytest.fixture(scope="module")
def nonclassical_toy_table(toy, toy_program):
    sk = toy_program[3]
    rng = random.Random(0)
    while True:
        t = gpt_table(toy, rng)
        if not certify(sk.with_data(t)).feasible:
            return t


def test_toy_bracket(toy_program, nonclassical_toy_table, toy):
    sk = toy_program[3]
    target = DataTable.constant(toy, Fraction(1, 2))
    res = robustness(sk, nonclassical_toy_table, target, Fraction(1, 64))
    assert res.width <= Fraction(1, 64)
    assert res.interval_property_holds()
    assert not certify(sk.with_data(nonclassical_toy_table.mix(target, res.r_lo))).feasible
    assert certify(sk.with_data(nonclassical_toy_table.mix(target, res.r_hi))).feasible
    assert (Fraction(0), False) in res.probes and (Fraction(1), True) in res.probes


def test_precondition_errors(toy, toy_program, nonclassical_toy_table):
    sk = toy_program[3]
    classical = classical_table(sk, random.Random(1))
    with pytest.raises(ScenarioError):
        robustness(sk, classical, classical)
    with pytest.raises(ScenarioError):
        robustness(sk, nonclassical_toy_table, nonclassical_toy_table)
    with pytest.raises(ValueError):
        robustness(sk, nonclassical_toy_table, classical, 0)


def test_interval_property_detects_inversions():
    ok = RobustnessResult(Fraction(1, 4), Fraction(1, 2), [(Fraction(0), False), (Fraction(1), True)])
    bad = RobustnessResult(Fraction(1, 4), Fraction(1, 2), [(Fraction(3, 4), False), (Fraction(1, 2), True)])
    assert ok.interval_property_holds() and not bad.interval_property_holds()
    assert ok.to_dict()["width"] == "1/4"
