from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncptm.fragment import GptFragment, stabilizer_qubit_fragment
from ncptm.identities import (
    IdentitySet,
    effect_identities,
    find_identities,
    state_identities,
    transformation_identities,
    vectorize,
)
from ncptm.linalg import in_row_span, rank, transpose

STAB = [(1, 1, -1, -1, 0, 0), (1, 1, 0, 0, -1, -1)]


def same_span(a, b):
    return all(in_row_span(b, v) for v in a) and all(in_row_span(a, v) for v in b)


def frag(states=((1, 0),), effects=((1, 0),), transformations=(((1, 0), (0, 1)),)):
    return GptFragment.create(
        2, [(f"s{i}", v) for i, v in enumerate(states)], [(f"e{i}", v) for i, v in enumerate(effects)],
        (1, 0), [(f"t{i}", m) for i, m in enumerate(transformations)],
        [tuple(f"e{i}" for i in range(len(effects)))])


def test_stabilizer_identities(stab):
    s, e, t = state_identities(stab), effect_identities(stab), transformation_identities(stab)
    assert len(s) == len(e) == 2
    assert same_span(s.generators, STAB) and same_span(e.generators, STAB)
    assert len(t) == 1 and in_row_span([(1, 1, -1, -1)], t.generators[0])


def test_three_transformations_have_no_identity():
    assert len(transformation_identities(stabilizer_qubit_fragment(("I", "Z", "S")))) == 0


def test_small_cases():
    assert len(state_identities(frag())) == 0
    assert state_identities(frag(states=((1, 0), (1, 0)))).generators == ((1, -1),)
    two = frag(effects=((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(-1, 2))))
    assert len(effect_identities(two)) == 0
    e = (Fraction(1, 2), Fraction(1, 2))
    assert effect_identities(frag(effects=(e, e, (1, 0)))).generators == ((1, -1, 0),)
    ident = ((1, 0), (0, 1))
    assert transformation_identities(frag(transformations=(ident, ident))).generators == ((1, -1),)


def test_vectorize_column_stacks():
    assert vectorize([[1, 2], [3, 4]]) == (1, 3, 2, 4)


def test_json_and_kind_errors(stab):
    s = state_identities(stab)
    assert IdentitySet.from_dict(s.to_dict()) == s
    with pytest.raises(ValueError):
        find_identities(stab, "measurements")


vectors = st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=1, max_size=6)


@given(vectors)
def test_generators_annihilate_and_generate(vs):
    f = GptFragment.create(3, [(f"s{i}", v) for i, v in enumerate(vs)], [("e", (1, 0, 0))],
                           (1, 0, 0), [("I", ((1, 0, 0), (0, 1, 0), (0, 0, 1)))], [("e",)])
    ids = state_identities(f)
    for g in ids.generators:
        assert all(sum(a * v[i] for a, v in zip(g, vs)) == 0 for i in range(3))
    assert len(ids) == len(vs) - rank(transpose(vs))
    # any relation among the vectors is generated: pick a kernel element by hand
    if len(ids):
        combo = tuple(sum(c * g[i] for c, g in zip(range(1, len(ids) + 1), ids.generators))
                      for i in range(len(vs)))
        assert in_row_span(ids.generators, combo)
