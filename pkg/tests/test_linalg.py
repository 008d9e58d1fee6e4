from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncptm.linalg import (
    format_rational,
    identity,
    integerize,
    kernel_basis,
    matmul,
    matvec,
    parse_rational,
    rank,
    rref,
    solve_linear,
    to_fraction,
    transpose,
)

small = st.integers(-6, 6)
rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))


@st.composite
def matrices(draw, max_rows=5, max_cols=6, elements=small):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [tuple(Fraction(draw(elements)) for _ in range(c)) for _ in range(r)]


def test_rref_identity():
    m, piv = rref(identity(2))
    assert m == identity(2) and piv == [0, 1]


def test_rref_proportional_rows():
    m, piv = rref([[1, 1], [2, 2]])
    assert m == [(1, 1), (0, 0)] and piv == [0]


def test_stabilizer_state_matrix_has_rank_4():
    bloch = [(1, 1, 0, 0), (1, -1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0), (1, 0, 0, 1), (1, 0, 0, -1)]
    assert rank(transpose(bloch)) == 4


def test_kernel_examples():
    assert kernel_basis(identity(2)) == []
    assert kernel_basis([[1, 1]]) == [(1, -1)]


def test_kernel_is_canonical():
    # RREF free-column parametrization, integerized with positive lead
    assert kernel_basis([[2, 4, 6]]) == [(2, -1, 0), (3, 0, -1)]


def test_solve_linear_examples():
    assert solve_linear(identity(3), [1, 2, 3]) == (1, 2, 3)
    x = solve_linear([[1, 1]], [1])
    assert x[0] + x[1] == 1
    assert solve_linear([[1], [1]], [0, 1]) is None
    with pytest.raises(ValueError):
        solve_linear([[1, 1]], [1, 2])


def test_rational_io():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-4, 2)) == "-2"
    assert parse_rational(" -3/9 ") == Fraction(-1, 3)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(TypeError):
        to_fraction(0.5)


@given(rationals)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    for v in kernel_basis(m):
        assert all(x == 0 for x in matvec(m, v))


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == len(m[0])


@given(matrices())
def test_kernel_deterministic_and_integral(m):
    a, b = kernel_basis(m), kernel_basis([list(r) for r in m])
    assert a == b
    for v in a:
        assert all(x.denominator == 1 for x in v)
        assert integerize(v) == v


@given(matrices(elements=rationals), st.data())
def test_solve_consistent_systems(m, data):
    x0 = [data.draw(rationals) for _ in range(len(m[0]))]
    b = matvec(m, x0)
    x = solve_linear(m, b)
    assert x is not None and matvec(m, x) == b


@given(matrices(max_rows=3, max_cols=3), matrices(max_rows=3, max_cols=3))
def test_rank_of_product_bounded(a, b):
    if len(a[0]) != len(b):
        return
    assert rank(matmul(a, b)) <= min(rank(a), rank(b))
