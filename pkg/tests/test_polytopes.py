import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncptm.fragment import GptFragment
from ncptm.identities import effect_identities, state_identities
from ncptm.polytopes import (
    EmptyPolytopeError,
    HPolytope,
    UnboundedPolytopeError,
    VRep,
    convex_weights,
    enumerate_vertices,
    measurement_polytope,
    source_polytope,
)

THIRD = Fraction(1, 3)


def test_stabilizer_measurement_polytope(stab):
    h = measurement_polytope(stab, effect_identities(stab))
    assert h.num_vars == 6 and len(h.equalities) == 5 and len(h.inequalities) == 6
    v = enumerate_vertices(h)
    assert len(v) == 8
    assert all(set(x) <= {0, 1} for x in v.vertices)


def test_stabilizer_source_polytope(stab):
    h = source_polytope(stab, state_identities(stab))
    v = enumerate_vertices(h)
    assert len(v) == 8
    for x in v.vertices:
        assert x[0] + x[1] == x[2] + x[3] == x[4] + x[5] == THIRD
        assert set(x) <= {0, THIRD}


def test_vertices_are_sorted_and_extremal(stab):
    h = measurement_polytope(stab, effect_identities(stab))
    v = enumerate_vertices(h)
    assert list(v.vertices) == sorted(v.vertices)
    assert all(h.is_vertex(x) for x in v.vertices)
    assert VRep.from_dict(v.to_dict()) == v


def simplex_fragment(states, measurements, effects):
    return GptFragment.create(2, states, effects, (1, 0), [("I", ((1, 0), (0, 1)))], measurements)


def test_small_measurement_polytopes():
    half = Fraction(1, 2)
    f = simplex_fragment([("w", (1, 0))], [("e", "f")], [("e", (half, half)), ("f", (half, -half))])
    assert enumerate_vertices(measurement_polytope(f, effect_identities(f))).vertices == ((0, 1), (1, 0))
    g = simplex_fragment([("w", (1, 0))], [("e", "f")], [("e", (half, 0)), ("f", (half, 0))])
    assert enumerate_vertices(measurement_polytope(g, effect_identities(g))).vertices == ((half, half),)


def test_small_source_polytopes():
    f = simplex_fragment([("w", (1, 0))], [("e",)], [("e", (1, 0))])
    assert enumerate_vertices(source_polytope(f, state_identities(f))).vertices == ((1,),)
    g = simplex_fragment([("a", (1, 1)), ("b", (1, -1))], [("e",)], [("e", (1, 0))])
    assert enumerate_vertices(source_polytope(g, state_identities(g))).vertices == ((0, 1), (1, 0))


def unit_square():
    return HPolytope.create(2, inequalities=[((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)])


def test_unit_square():
    assert len(enumerate_vertices(unit_square())) == 4


def test_errors():
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(HPolytope.create(2, inequalities=[((1, 0), 0), ((0, 1), 0)]))
    with pytest.raises(EmptyPolytopeError):
        enumerate_vertices(HPolytope.create(1, inequalities=[((1,), 1), ((-1,), 0)]))
    with pytest.raises(EmptyPolytopeError):
        enumerate_vertices(HPolytope.create(1, equalities=[((0,), 1)]))


@given(st.integers(0, 10**6))
def test_random_mixtures_decompose(seed):
    rng = random.Random(seed)
    h = HPolytope.create(3, inequalities=[((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0),
                                          ((-1, -1, -1), -1), ((1, -1, 0), Fraction(-1, 2))])
    v = enumerate_vertices(h)
    weights = [Fraction(rng.randint(0, 9)) for _ in v.vertices]
    total = sum(weights) or Fraction(1)
    point = tuple(sum(w * x[i] for w, x in zip(weights, v.vertices)) / total for i in range(3))
    if sum(weights):
        assert h.contains(point) and convex_weights(point, v.vertices) is not None
    outside = (point[0], point[1], point[2] + 2)
    assert not h.contains(outside) and convex_weights(outside, v.vertices) is None


def test_h_to_v_round_trip_tightness():
    h = unit_square()
    v = enumerate_vertices(h)
    for a, b in h.inequalities:
        tight = [x for x in v.vertices if sum(ai * xi for ai, xi in zip(a, x)) == b]
        assert len(tight) >= 2
