"""Exact two-phase simplex over the rationals.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with a dense tableau of
``gmpy2.mpq`` entries.  Linearly dependent rows are removed up front, so
the working tableau always has full row rank.  Entering columns follow
Dantzig's rule; ties in the ratio test are broken lexicographically
against the basis the phase started from, which rules out cycling.

Dual values are read off the reduced costs of the artificial columns,
which stay in the tableau for that purpose.  On an optimal result the
duals ``y`` satisfy ``y.A <= c`` and ``y.b == c.x``.  On an infeasible
result they form a Farkas certificate: ``y.A >= 0`` and ``y.b < 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

from .linalg import Vector, to_fraction

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Vector | None = None
    value: Fraction | None = None
    duals: Vector | None = None
    pivots: int = 0


def _presolve(a: list[list], b: list) -> tuple[list[int], list[int], list | None]:
    """Pick a maximal independent subset of rows.

    Returns ``(kept row indices, pivot columns, None)``; the pivot columns
    form a basis of the kept rows.  When some dependent row contradicts the
    others the result is ``([], [], y)`` with ``y.A = 0`` and ``y.b < 0``.
    """
    m = len(a)
    echelon: list[tuple[int, dict, object, dict]] = []  # (pivot, row, rhs, combination)
    kept, pivots = [], []
    for i in range(m):
        row = {j: v for j, v in enumerate(a[i]) if v != 0}
        rhs = b[i]
        comb = {i: mpq(1)}
        for piv, erow, erhs, ecomb in echelon:
            f = row.get(piv)
            if f is None:
                continue
            for j, v in erow.items():
                nv = row.get(j, 0) - f * v
                if nv == 0:
                    row.pop(j, None)
                else:
                    row[j] = nv
            rhs -= f * erhs
            for r, v in ecomb.items():
                nv = comb.get(r, 0) - f * v
                if nv == 0:
                    comb.pop(r, None)
                else:
                    comb[r] = nv
        if row:
            piv = min(row)
            inv = 1 / row[piv]
            echelon.append((piv, {j: v * inv for j, v in row.items()}, rhs * inv,
                            {r: v * inv for r, v in comb.items()}))
            kept.append(i)
            pivots.append(piv)
        elif rhs != 0:
            s = -1 if rhs > 0 else 1
            y = [mpq(0)] * m
            for r, v in comb.items():
                y[r] = v * s
            return [], [], y
    return kept, pivots, None


class _Tableau:
    def __init__(self, a: list[list], b: list, n: int):
        m = len(a)
        self.m, self.n = m, n
        self.sign = []
        self.rows = []
        for i, (row, rhs) in enumerate(zip(a, b)):
            s = -1 if rhs < 0 else 1
            self.sign.append(s)
            art = [mpq(0)] * m
            art[i] = mpq(1)
            self.rows.append([x * s for x in row] + art + [rhs * s])
        self.basis = [n + i for i in range(m)]
        self.obj: list = []
        self.pivots = 0

    def set_objective(self, cost: list) -> None:
        """Reduced-cost row for ``cost`` (length n + m) under the current basis."""
        obj = list(cost) + [mpq(0)]
        for i, row in enumerate(self.rows):
            cb = cost[self.basis[i]]
            if cb != 0:
                for j, v in enumerate(row):
                    if v != 0:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, r: int, q: int) -> None:
        prow = self.rows[r]
        piv = prow[q]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v != 0]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[q]
                if f != 0:
                    for j in nz:
                        row[j] -= f * prow[j]
        if self.obj:
            f = self.obj[q]
            if f != 0:
                obj = self.obj
                for j in nz:
                    obj[j] -= f * prow[j]
        self.basis[r] = q
        self.pivots += 1

    def crash(self, columns: Sequence[int], mirror: Mapping[int, int] | None) -> bool:
        """Pivot ``columns`` into the basis; True if the result is primal feasible.

        ``mirror`` maps a column to another column that is its exact
        negation; a row left with negative rhs swaps to the mirror.
        """
        assigned = [False] * self.m
        for q in columns:
            r = next((i for i in range(self.m) if not assigned[i] and self.rows[i][q] != 0), None)
            if r is None:
                return False
            self.pivot(r, q)
            assigned[r] = True
        if not all(assigned):
            return False
        for i, row in enumerate(self.rows):
            if row[-1] < 0:
                other = (mirror or {}).get(self.basis[i])
                if other is None:
                    return False
                self.rows[i] = [-v for v in row]
                self.basis[i] = other
        return True

    def _lex_less(self, i: int, r: int, q: int, lex_cols: list[int]) -> bool:
        ri, rr = self.rows[i], self.rows[r]
        for c in lex_cols:
            a, b = ri[c] / ri[q], rr[c] / rr[q]
            if a != b:
                return a < b
        return False

    def run(self, allowed: int) -> str:
        """Iterate to optimality over columns ``< allowed``."""
        rows = self.rows
        lex_cols = list(self.basis)
        while True:
            obj = self.obj
            q, best = None, 0
            for j in range(allowed):
                if obj[j] < best:
                    q, best = j, obj[j]
            if q is None:
                return OPTIMAL
            r, ratio = None, None
            for i, row in enumerate(rows):
                v = row[q]
                if v > 0:
                    t = row[-1] / v
                    if ratio is None or t < ratio or (t == ratio and self._lex_less(i, r, q, lex_cols)):
                        r, ratio = i, t
            if r is None:
                return UNBOUNDED
            self.pivot(r, q)

    def duals(self, art_cost: int) -> list:
        n = self.n
        return [(art_cost - self.obj[n + i]) * self.sign[i] for i in range(self.m)]


def solve_lp(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence, *,
             basis_hint: Sequence[int] | None = None,
             mirror: Mapping[int, int] | None = None) -> LPResult:
    """Minimize ``c.x`` subject to ``a_eq x = b_eq`` and ``x >= 0``, exactly.

    ``basis_hint`` lists columns to try as a starting basis for the
    independent rows; if they do not give a feasible basis the solver falls
    back to phase one.
    """
    n = len(c)
    if len(a_eq) != len(b_eq):
        raise ValueError("constraint matrix and rhs disagree on row count")
    if any(len(row) != n for row in a_eq):
        raise ValueError("constraint rows must have len(c) entries")
    a = [[mpq(to_fraction(v)) for v in row] for row in a_eq]
    b = [mpq(to_fraction(v)) for v in b_eq]
    cost = [mpq(to_fraction(v)) for v in c]
    m_full = len(a)

    kept, _, farkas = _presolve(a, b)
    if farkas is not None:
        return LPResult(INFEASIBLE, duals=tuple(to_fraction(v) for v in farkas))

    def expand(y_kept):
        y = [Fraction(0)] * m_full
        for i, v in zip(kept, y_kept):
            y[i] = to_fraction(v)
        return tuple(y)

    if not kept:
        if any(v < 0 for v in cost):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, tuple(Fraction(0) for _ in range(n)), Fraction(0), expand([]))

    a = [a[i] for i in kept]
    b = [b[i] for i in kept]
    m = len(a)

    tab = None
    if basis_hint is not None:
        tab = _Tableau(a, b, n)
        if not tab.crash(basis_hint, mirror):
            log.debug("basis hint rejected; running phase one")
            tab = None
    if tab is None:
        tab = _Tableau(a, b, n)
        tab.set_objective([mpq(0)] * n + [mpq(1)] * m)
        tab.run(n)
        if tab.obj[-1] != 0:
            # -obj[-1] is the phase-one optimum; nonzero means infeasible.
            y = tab.duals(1)
            return LPResult(INFEASIBLE, duals=expand([-v for v in y]), pivots=tab.pivots)
        # Full row rank: every zero-level artificial can be pivoted out.
        for i in range(m):
            if tab.basis[i] >= n:
                row = tab.rows[i]
                q = next(j for j in range(n) if row[j] != 0)
                tab.pivot(i, q)

    tab.set_objective(cost + [mpq(0)] * m)
    status = tab.run(n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)

    x = [mpq(0)] * n
    for i, col in enumerate(tab.basis):
        if col < n:
            x[col] = tab.rows[i][-1]
    return LPResult(
        OPTIMAL,
        x=tuple(to_fraction(v) for v in x),
        value=to_fraction(-tab.obj[-1]),
        duals=expand(tab.duals(0)),
        pivots=tab.pivots,
    )


def independent_columns(a: Sequence[Sequence]) -> list[int]:
    """Columns forming a basis for a maximal independent subset of rows of ``a``."""
    rows = [[mpq(to_fraction(v)) for v in row] for row in a]
    _, pivots, _ = _presolve(rows, [mpq(0)] * len(rows))
    return pivots


def solve_lp_free(c: Sequence, a_ge: Sequence[Sequence], b_ge: Sequence,
                  a_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Minimize ``c.z`` over free ``z`` with ``a_ge z >= b_ge`` and ``a_eq z = b_eq``.

    Reduced to standard form via ``z = z+ - z-`` plus one slack per
    inequality.  Only ``status``, ``x`` (the recovered ``z``) and ``value``
    are meaningful on the result.
    """
    n = len(c)
    k = len(a_ge)
    rows, rhs = [], []
    for i, (row, bi) in enumerate(zip(a_ge, b_ge)):
        slack = [0] * k
        slack[i] = -1
        rows.append(list(row) + [-v for v in row] + slack)
        rhs.append(bi)
    for row, bi in zip(a_eq, b_eq):
        rows.append(list(row) + [-v for v in row] + [0] * k)
        rhs.append(bi)
    cost = list(c) + [-v for v in c] + [0] * k
    res = solve_lp(cost, rows, rhs)
    if res.status != OPTIMAL:
        return LPResult(res.status, pivots=res.pivots)
    z = tuple(res.x[j] - res.x[n + j] for j in range(n))
    return LPResult(OPTIMAL, x=z, value=res.value, pivots=res.pivots)
