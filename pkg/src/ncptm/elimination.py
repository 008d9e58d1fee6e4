"""Noncontextuality inequalities by Fourier-Motzkin elimination.

The system lives over the program unknowns ``x`` followed by one symbol
per data entry.  A row ``(a, g, c)`` stands for ``a.x + g.d + c >= 0``
(or ``= 0``).  Equalities are substituted away first; the remaining
unknowns are then eliminated one at a time with Chernikov's ancestor
rule.  What is left is a system over the data symbols alone, which is
put into a canonical form:

* implicit equalities are detected and all equalities brought to RREF;
* inequalities are reduced modulo the equalities and scaled to coprime
  integers (positive scaling only);
* rows implied by the others are dropped with an exact LP check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .fragment import GptFragment, Key
from .identities import IdentitySet
from .linalg import rref
from .lp import OPTIMAL, solve_lp_free
from .polytopes import VRep
from .program import NcInequality, NcProgram, build_skeleton

log = logging.getLogger(__name__)

GE = ">="
EQ = "="
DEFAULT_ROW_BUDGET = 10**6

Row = tuple[Fraction, ...]


class RowBudgetExceeded(RuntimeError):
    """Raised when elimination generates more rows than allowed.

    ``partial`` holds the inequalities over the data alone found so far;
    they are valid but in general not a complete description.
    """

    def __init__(self, message: str, partial: list[NcInequality], generated: int):
        super().__init__(message)
        self.partial = partial
        self.generated = generated


@dataclass
class IneqSystem:
    num_unknowns: int
    data_keys: list[Key]
    rows: list[tuple[Row, str]]
    flag: bool = False
    N: int = 1

    @property
    def num_vars(self) -> int:
        return self.num_unknowns + len(self.data_keys)

    def __post_init__(self):
        width = self.num_vars + 1
        for row, rel in self.rows:
            if len(row) != width:
                raise ValueError(f"row of width {len(row)} in a system of width {width}")
            if rel not in (GE, EQ):
                raise ValueError(f"unknown relation {rel!r}")


def system_from_program(p: NcProgram) -> IneqSystem:
    """Positivity of the unknowns plus every program row, with data as symbols."""
    n = len(p.col_index)
    m = len(p.data_keys)
    pos = {key: i for i, key in enumerate(p.data_keys)}
    zero, one = Fraction(0), Fraction(1)
    rows: list[tuple[Row, str]] = []
    for j in range(n):
        rows.append((tuple(one if i == j else zero for i in range(n + m + 1)), GE))
    for row, tag in zip(p.M, p.row_tags):
        d = [zero] * m
        c = zero
        if tag[0] == "data":
            d[pos[tag[1:]]] = -one
        elif tag[0] == "normalization":
            c = -one
        rows.append((tuple(row) + tuple(d) + (c,), EQ))
    return IneqSystem(n, list(p.data_keys), rows, flag=p.data_scale != 1, N=p.N)


def build_system(phi: VRep, psi: VRep, t_ids: IdentitySet, N: int | None = None,
                 flag: bool = False) -> IneqSystem:
    """With ``flag=True`` the symbols are the flag-convexified ``p(k, s | t)``."""
    return system_from_program(build_skeleton(phi, psi, t_ids, N, flag=flag))


def system_for(f: GptFragment, flag: bool = False) -> IneqSystem:
    from .program import program_for

    _, _, _, skeleton = program_for(f, flag=flag)
    return system_from_program(skeleton)


def _normalize(row: Sequence[Fraction]) -> Row:
    """Coprime integer multiple of ``row`` under positive scaling."""
    nz = [v for v in row if v]
    if not nz:
        return tuple(Fraction(0) for _ in row)
    lcm = 1
    for v in nz:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    g = 0
    for v in nz:
        g = math.gcd(g, int(v * lcm))
    s = Fraction(lcm, g)
    return tuple(v * s for v in row)


@dataclass
class EliminationResult:
    inequalities: list[NcInequality]
    equalities: list[NcInequality]
    complete: bool = True
    generated: int = 0
    peak_rows: int = 0
    order: list[int] = field(default_factory=list)

    def all_inequalities(self) -> list[NcInequality]:
        """Equalities as opposite pairs of inequalities, then the inequalities."""
        out = []
        for e in self.equalities:
            out.append(e)
            out.append(NcInequality({k: -v for k, v in e.coeffs.items()}, -e.constant).canonical())
        return out + self.inequalities

    def holds(self, data) -> bool:
        return all(i.holds(data) for i in self.inequalities) and all(
            e.lhs(data) + e.constant == 0 for e in self.equalities)


def _substitute(n: int, eqs: list[list], ineqs: list[tuple[list, frozenset]]):
    """Gaussian substitution of unknowns; returns leftover equalities over the data."""
    data_eqs = []
    pending = list(eqs)
    while pending:
        eq = pending.pop(0)
        j = next((i for i in range(n) if eq[i]), None)
        if j is None:
            if any(eq):
                data_eqs.append(eq)
            continue
        inv = 1 / eq[j]
        eq = [v * inv for v in eq]
        for other in pending:
            f = other[j]
            if f:
                for i, v in enumerate(eq):
                    if v:
                        other[i] -= f * v
        for row, _ in ineqs:
            f = row[j]
            if f:
                for i, v in enumerate(eq):
                    if v:
                        row[i] -= f * v
    return data_eqs


def _fourier_motzkin(n: int, ineqs: list[tuple[list, frozenset]], budget: int):
    """Eliminate all unknowns; returns (rows over data only, generated, peak, order)."""
    done: dict[Row, frozenset] = {}
    live: dict[Row, frozenset] = {}

    def add(target: dict, row: Sequence[Fraction], anc: frozenset) -> None:
        key = _normalize(row)
        old = target.get(key)
        if old is None or len(anc) < len(old):
            target[key] = anc

    for row, anc in ineqs:
        add(done if not any(row[:n]) else live, row, anc)

    generated = len(live)
    peak = len(live)
    order = []
    remaining = {j for row in live for j in range(n) if row[j]}
    while live:
        best = None
        for j in sorted(remaining):
            pos = sum(1 for row in live if row[j] > 0)
            neg = sum(1 for row in live if row[j] < 0)
            if best is None or pos * neg < best[0]:
                best = (pos * neg, j)
        j = best[1]
        order.append(j)
        remaining.discard(j)
        limit = len(order) + 1
        pos = [(r, a) for r, a in live.items() if r[j] > 0]
        neg = [(r, a) for r, a in live.items() if r[j] < 0]
        nxt: dict[Row, frozenset] = {}
        for r, a in live.items():
            if not r[j]:
                add(nxt, r, a)
        for rp, ap in pos:
            for rn, an in neg:
                anc = ap | an
                if len(anc) > limit:
                    continue
                fp, fn = -rn[j], rp[j]
                add(nxt, [fp * u + fn * v for u, v in zip(rp, rn)], anc)
                generated += 1
                if generated > budget:
                    partial = dict(done)
                    partial.update({r: a for r, a in nxt.items() if not any(r[:n])})
                    raise RowBudgetExceeded(
                        f"row budget of {budget} exceeded after {len(order) - 1} eliminations",
                        list(partial), generated)
        live = {}
        for r, a in nxt.items():
            add(done if not any(r[:n]) else live, r, a)
        peak = max(peak, len(live))
        log.debug("eliminated unknown %d: %d live rows", j, len(live))
    return list(done), generated, peak, order


def _to_inequality(row: Sequence[Fraction], n: int, keys: Sequence[Key]) -> NcInequality:
    return NcInequality({k: v for k, v in zip(keys, row[n:-1]) if v}, row[-1])


def _max_over(target: Row, eqs: list[Row], ineqs: list[Row]) -> Fraction | None:
    """Maximum of ``g.d`` over the region; None if unbounded or empty."""
    res = solve_lp_free([-v for v in target[:-1]],
                        [r[:-1] for r in ineqs], [-r[-1] for r in ineqs],
                        [r[:-1] for r in eqs], [-r[-1] for r in eqs])
    return -res.value if res.status == OPTIMAL else None


def _min_over(target: Row, eqs: list[Row], ineqs: list[Row]) -> Fraction | None:
    res = solve_lp_free(list(target[:-1]),
                        [r[:-1] for r in ineqs], [-r[-1] for r in ineqs],
                        [r[:-1] for r in eqs], [-r[-1] for r in eqs])
    return res.value if res.status == OPTIMAL else None


def canonicalize_system(eqs: Iterable[Sequence], ineqs: Iterable[Sequence],
                        redundancy: bool = True) -> tuple[list[Row], list[Row]]:
    """Canonical (equalities, inequalities) for rows ``g.d + c`` over the data.

    Equalities come back in RREF; inequalities reduced modulo them, scaled
    to coprime integers, deduplicated, irredundant if requested, sorted.
    """
    eqs = [tuple(Fraction(v) for v in r) for r in eqs]
    ineqs = [tuple(Fraction(v) for v in r) for r in ineqs]
    while True:
        eqs = _rref_rows(eqs)
        ineqs = _reduce(ineqs, eqs)
        if redundancy:
            implicit = [r for r in ineqs if _max_over(r, eqs, ineqs) == -r[-1]]
            if implicit:
                eqs = eqs + implicit
                continue
        break
    if redundancy:
        kept = list(ineqs)
        for r in list(ineqs):
            others = [o for o in kept if o != r]
            low = _min_over(r, eqs, others)
            if low is not None and low + r[-1] >= 0:
                kept = others
        ineqs = kept
    return eqs, sorted(ineqs)


def _rref_rows(eqs: list[Row]) -> list[Row]:
    if not eqs:
        return []
    width = len(eqs[0])
    # Constant column last, so a pivot there means the equalities are inconsistent.
    m, pivots = rref([list(r) for r in eqs], cols=width)
    if pivots and pivots[-1] == width - 1:
        raise ValueError("data equalities are inconsistent: no table satisfies them")
    return [_normalize(m[i]) for i in range(len(pivots))]


def _reduce(ineqs: list[Row], eqs: list[Row]) -> list[Row]:
    pivots = [next(i for i, v in enumerate(e) if v) for e in eqs]
    out = set()
    for r in ineqs:
        r = list(r)
        for p, e in zip(pivots, eqs):
            if r[p]:
                f = r[p] / e[p]
                r = [u - f * v for u, v in zip(r, e)]
        if not any(r[:-1]):
            if r[-1] < 0:
                raise ValueError("inequalities are inconsistent: no table satisfies them")
            continue
        out.add(_normalize(r))
    return sorted(out)


def eliminate(sys: IneqSystem, *, row_budget: int = DEFAULT_ROW_BUDGET,
              redundancy: bool = True) -> EliminationResult:
    n = sys.num_unknowns
    eqs = [list(r) for r, rel in sys.rows if rel == EQ]
    ineqs = [(list(r), frozenset({i})) for i, (r, rel) in enumerate(sys.rows) if rel == GE]
    data_eqs = _substitute(n, eqs, ineqs)
    try:
        rows, generated, peak, order = _fourier_motzkin(n, ineqs, row_budget)
    except RowBudgetExceeded as exc:
        exc.partial = [_to_inequality(r, n, sys.data_keys).canonical() for r in exc.partial
                       if any(r[n:-1])]
        raise
    eq_rows, ineq_rows = canonicalize_system([r[n:] for r in data_eqs], [r[n:] for r in rows],
                                             redundancy=redundancy)
    keys = sys.data_keys
    as_ineq = [_to_inequality(r, 0, keys) for r in ineq_rows]
    as_eq = [_to_inequality(r, 0, keys) for r in eq_rows]
    return EliminationResult(as_ineq, as_eq, True, generated, peak, order)


def eliminate_all(sys: IneqSystem, *, row_budget: int = DEFAULT_ROW_BUDGET,
                  redundancy: bool = True) -> list[NcInequality]:
    """Complete inequality description of the classically explainable tables.

    Equalities among the data appear as pairs of opposite inequalities.
    """
    return eliminate(sys, row_budget=row_budget, redundancy=redundancy).all_inequalities()


def to_original(ineqs: Iterable[NcInequality], N: int) -> list[NcInequality]:
    """Flag-convexified inequalities rewritten over ``p(k|s,t)``: constant times N."""
    return [NcInequality(dict(i.coeffs), i.constant * N, dict(i.meta)) for i in ineqs]


def canonical_set(ineqs: Iterable[NcInequality]) -> frozenset:
    return frozenset(i.canonical().frozen() for i in ineqs)
