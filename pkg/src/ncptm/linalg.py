"""Exact rational linear algebra.

Public values are :class:`fractions.Fraction`; vectors are tuples of
Fractions and matrices are lists of such tuples (row-major).  Elimination
runs on ``gmpy2.mpq`` internally, which keeps every entry in lowest terms
and is an order of magnitude faster than ``Fraction`` in tight loops.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Vector = tuple[Fraction, ...]
Matrix = list[Vector]


def to_fraction(value) -> Fraction:
    """Coerce ints, strings like ``"-3/4"``, Fractions and mpq to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if type(value) is type(mpq()):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError(f"refusing to convert float {value!r}; pass an exact value")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(value) -> str:
    q = to_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    out = [vector(r) for r in rows]
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> Vector:
    if len(v) != len(m):
        raise ValueError(f"dimension mismatch: {len(v)} vs {len(m)} rows")
    cols = len(m[0]) if m else 0
    out = [Fraction(0)] * cols
    for coeff, row in zip(v, m):
        if coeff:
            for j, x in enumerate(row):
                if x:
                    out[j] += coeff * x
    return tuple(out)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError("dimension mismatch in matmul")
    bt = transpose(b)
    return [tuple(dot(row, col) for col in bt) for row in a]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [tuple(col) for col in zip(*m)]


def identity(n: int) -> Matrix:
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def _rref_mpq(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Gauss-Jordan in place on mpq rows; returns (nonzero rows, pivots)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: Sequence[Sequence], cols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    The returned matrix keeps the input shape; zero rows sit at the bottom.
    ``cols`` is only needed when ``m`` has no rows.
    """
    ncols = len(m[0]) if m else (cols or 0)
    rows = [[mpq(to_fraction(x)) for x in row] for row in m]
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    reduced, pivots = _rref_mpq(rows, ncols)
    out = [tuple(to_fraction(x) for x in row) for row in reduced]
    out.extend(tuple(Fraction(0) for _ in range(ncols)) for _ in range(len(m) - len(out)))
    return out, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1])


def integerize(v: Sequence) -> Vector:
    """Scale to coprime integers with the first nonzero entry positive."""
    fr = [to_fraction(x) for x in v]
    nz = [x for x in fr if x]
    if not nz:
        return tuple(fr)
    lcm = 1
    for x in nz:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if nz[0] < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


def kernel_basis(m: Sequence[Sequence], cols: int | None = None) -> list[Vector]:
    """Basis of the right nullspace, one vector per free column of the RREF.

    Each vector is integerized (coprime, leading entry positive), so the
    output is a deterministic function of ``m``.
    """
    ncols = len(m[0]) if m else (cols or 0)
    reduced, pivots = rref(m, cols=ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(integerize(v))
    return basis


def solve_linear(m: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One exact solution of ``m @ x = b``, or None when inconsistent.

    Free variables are set to zero, so the solution is basic.
    """
    if len(m) != len(b):
        raise ValueError(f"dimension mismatch: {len(m)} rows vs rhs of length {len(b)}")
    if not m:
        raise ValueError("empty system")
    ncols = len(m[0])
    rows = [[mpq(to_fraction(x)) for x in row] + [mpq(to_fraction(rhs))]
            for row, rhs in zip(m, b)]
    reduced, pivots = _rref_mpq(rows, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = to_fraction(row[ncols])
    return tuple(x)


def in_row_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    """Whether ``v`` is a rational linear combination of ``vectors``."""
    if not vectors:
        return all(x == 0 for x in v)
    return solve_linear(transpose(vectors), list(v)) is not None
