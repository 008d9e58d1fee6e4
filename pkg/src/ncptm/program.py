"""The noncontextuality linear program and its Farkas certificates.

Unknowns are the joint weights ``x[(kp, k, t)] = p(kp, k | t)`` of an
extremal measurement assignment ``kp`` and an extremal source assignment
``k`` given transformation ``t``.  Rows, in order:

* normalization, one per ``t``: the weights sum to 1;
* causal independence, one per ``(k, {t, t'})``: the ``k``-marginal does
  not depend on ``t``;
* transformation identities, one per ``(kp, k, c)``;
* data, one per ``(effect, state, t)``:
  ``N * sum phi[kp][effect] * psi[k][state] * x = p(effect|state, t)``.

``certify`` solves ``min sum(v)  s.t.  M(u - v) = b,  u, v >= 0``.  Its LP
dual is exactly ``max -y.b  s.t.  0 <= y.M <= 1``, so one solve yields a
feasible ``x`` (optimum 0) or the maximally violating witness ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Sequence

from .fragment import DataTable, GptFragment, Key, ScenarioError, table_keys
from .identities import IdentitySet
from .linalg import Vector, dot, format_rational, to_fraction, vecmat
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, independent_columns, solve_lp
from .polytopes import VRep

FEASIBLE = "feasible"
INFEASIBLE_VERDICT = "infeasible"

Column = tuple[int, int, str]  # (measurement vertex, source vertex, transformation id)


@dataclass
class NcProgram:
    M: list[Vector]
    b: Vector | None
    row_tags: list[tuple]
    col_index: list[Column]
    N: int
    data_keys: list[Key]
    transformation_ids: list[str]
    data_scale: Fraction = Fraction(1)
    psi: VRep | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.M), len(self.col_index)

    def data_rows(self) -> list[int]:
        return [i for i, tag in enumerate(self.row_tags) if tag[0] == "data"]

    def constant_rows(self) -> list[int]:
        return [i for i, tag in enumerate(self.row_tags) if tag[0] != "data"]

    def constant_rhs(self, i: int) -> Fraction:
        return Fraction(1) if self.row_tags[i][0] == "normalization" else Fraction(0)

    def classical_table_constraints(self) -> tuple[list[Vector], list[Fraction]]:
        """Rows cutting out the ``x`` whose data rows form a genuine data table.

        Besides the non-data rows, each state must carry source marginal
        ``1/N`` under every transformation; given the measurement sums this
        is exactly normalization of every measurement on that state.
        """
        rows = self.constant_rows()
        a = [self.M[i] for i in rows]
        b = [self.constant_rhs(i) for i in rows]
        for s_pos, s in enumerate(self.psi.var_labels):
            for t in self.transformation_ids:
                a.append(tuple(self.psi.vertices[k][s_pos] if tt == t else Fraction(0)
                               for _, k, tt in self.col_index))
                b.append(Fraction(1, self.N))
        return a, b

    def with_data(self, data: DataTable) -> "NcProgram":
        """Copy of this program with the data rows' right-hand side filled in."""
        missing = [key for key in self.data_keys if key not in data.entries]
        if missing:
            raise ScenarioError(f"data table lacks entries for the scenario, e.g. {missing[0]}")
        b = []
        for tag in self.row_tags:
            if tag[0] == "data":
                b.append(self.data_scale * data.entries[tag[1:]])
            else:
                b.append(Fraction(1) if tag[0] == "normalization" else Fraction(0))
        return replace(self, b=tuple(b))


def expected_rows(n_out: int, n_in: int, n_t: int, n_gen: int, n_effects: int, n_states: int) -> int:
    return n_t + n_in * n_t * (n_t - 1) // 2 + n_out * n_in * n_gen + n_effects * n_states * n_t


def build_skeleton(phi: VRep, psi: VRep, t_ids: IdentitySet, N: int | None = None,
                   flag: bool = False) -> NcProgram:
    """Constraint matrix for a scenario, with ``b`` left unset.

    With ``flag=True`` the data rows omit the factor ``N`` and expect the
    flag-convexified probabilities ``p(k, s | t) = p(k | s, t) / N``.
    """
    if t_ids.kind != "transformations":
        raise ValueError("build_program needs transformation identities")
    effect_ids = list(phi.var_labels)
    state_ids = list(psi.var_labels)
    n_states = len(state_ids)
    N = n_states if N is None else N
    if N != n_states:
        raise ScenarioError(f"N = {N} but the source polytope has {n_states} states")
    tids = list(t_ids.process_ids)
    n_out, n_in = len(phi.vertices), len(psi.vertices)
    cols = list(product(range(n_out), range(n_in), tids))
    col_of = {c: j for j, c in enumerate(cols)}
    ncols = len(cols)
    zero = Fraction(0)

    rows: list[Vector] = []
    tags: list[tuple] = []

    def emit(entries: Mapping[int, Fraction], tag: tuple) -> None:
        row = [zero] * ncols
        for j, v in entries.items():
            row[j] += v
        rows.append(tuple(row))
        tags.append(tag)

    for t in tids:
        emit({col_of[(a, k, t)]: Fraction(1) for a in range(n_out) for k in range(n_in)},
             ("normalization", t))
    for k in range(n_in):
        for t, t2 in combinations(tids, 2):
            entries = {}
            for a in range(n_out):
                entries[col_of[(a, k, t)]] = Fraction(1)
                entries[col_of[(a, k, t2)]] = Fraction(-1)
            emit(entries, ("causal", k, t, t2))
    for a, k in product(range(n_out), range(n_in)):
        for c, gen in enumerate(t_ids.generators):
            emit({col_of[(a, k, t)]: alpha for t, alpha in zip(tids, gen) if alpha},
                 ("transformation-identity", a, k, c))
    scale = Fraction(1) if flag else Fraction(N)
    for e_pos, effect in enumerate(effect_ids):
        for s_pos, state in enumerate(state_ids):
            for t in tids:
                entries = {}
                for a, phi_v in enumerate(phi.vertices):
                    if not phi_v[e_pos]:
                        continue
                    for k, psi_v in enumerate(psi.vertices):
                        w = phi_v[e_pos] * psi_v[s_pos]
                        if w:
                            entries[col_of[(a, k, t)]] = scale * w
                emit(entries, ("data", effect, state, t))

    assert len(rows) == expected_rows(n_out, n_in, len(tids), len(t_ids.generators),
                                      len(effect_ids), n_states)
    return NcProgram(
        M=rows, b=None, row_tags=tags, col_index=cols, N=N,
        data_keys=table_keys(effect_ids, state_ids, tids),
        transformation_ids=tids,
        data_scale=Fraction(1, N) if flag else Fraction(1),
        psi=psi,
    )


def build_program(phi: VRep, psi: VRep, t_ids: IdentitySet, data: DataTable,
                  N: int | None = None, flag: bool = False) -> NcProgram:
    if (list(data.effect_ids) != list(phi.var_labels)
            or list(data.state_ids) != list(psi.var_labels)
            or list(data.transformation_ids) != list(t_ids.process_ids)):
        raise ScenarioError("data table index sets do not match the scenario")
    return build_skeleton(phi, psi, t_ids, N, flag).with_data(data)


@dataclass
class CertResult:
    verdict: str
    x: Vector | None = None
    witness: Vector | None = None
    witness_value: Fraction | None = None
    # True when the box-constrained dual optimum was attained; False when b
    # lies outside the column space of M and any scaling of y works.
    witness_optimal: bool = True
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.verdict == FEASIBLE

    def check(self, p: NcProgram) -> bool:
        """Re-verify the defining conditions of this result exactly."""
        if self.feasible:
            return (all(v >= 0 for v in self.x)
                    and all(dot(row, self.x) == bi for row, bi in zip(p.M, p.b)))
        ym = vecmat(self.witness, p.M)
        return all(0 <= v <= 1 for v in ym) and dot(self.witness, p.b) == self.witness_value < 0


def certify(p: NcProgram) -> CertResult:
    """Exact feasibility verdict with a model point or a Farkas witness."""
    if p.b is None:
        raise ValueError("program has no data; use NcProgram.with_data")
    n = len(p.col_index)
    a = [row + tuple(-v for v in row) for row in p.M]
    cost = [0] * n + [1] * n
    mirror = {j: n + j for j in range(n)}
    mirror.update({n + j: j for j in range(n)})
    res = solve_lp(cost, a, p.b, basis_hint=independent_columns(p.M), mirror=mirror)
    if res.status == INFEASIBLE:
        # b is not in the column space of M: y.M = 0 and y.b < 0.
        y = res.duals
        return CertResult(INFEASIBLE_VERDICT, witness=y, witness_value=dot(y, p.b),
                          witness_optimal=False, pivots=res.pivots)
    if res.status != OPTIMAL:
        raise RuntimeError(f"unexpected LP status {res.status}")
    if res.value == 0:
        return CertResult(FEASIBLE, x=res.x[:n], pivots=res.pivots)
    y = tuple(-v for v in res.duals)
    return CertResult(INFEASIBLE_VERDICT, witness=y, witness_value=dot(y, p.b), pivots=res.pivots)


@dataclass
class NcInequality:
    """``sum(coeffs[k, s, t] * p(k|s,t)) + constant >= 0``."""

    coeffs: dict[Key, Fraction]
    constant: Fraction = Fraction(0)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.coeffs = {key: to_fraction(v) for key, v in self.coeffs.items() if v != 0}
        self.constant = to_fraction(self.constant)

    def lhs(self, data: DataTable | Mapping[Key, Fraction]) -> Fraction:
        entries = data.entries if isinstance(data, DataTable) else data
        missing = [key for key in self.coeffs if key not in entries]
        if missing:
            raise KeyError(f"data table has no entry for {missing[0]}")
        return sum((g * entries[key] for key, g in self.coeffs.items()), Fraction(0))

    def holds(self, data) -> bool:
        return self.lhs(data) + self.constant >= 0

    def is_trivial(self) -> bool:
        return not self.coeffs

    def canonical(self) -> "NcInequality":
        """Coprime integer coefficients; only positive rescaling is applied."""
        values = [*self.coeffs.values(), self.constant]
        nz = [v for v in values if v]
        if not nz:
            return NcInequality({}, Fraction(0))
        lcm = 1
        for v in nz:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        g = 0
        for v in nz:
            g = math.gcd(g, int(v * lcm))
        scale = Fraction(lcm, g)
        return NcInequality({key: v * scale for key, v in self.coeffs.items()},
                            self.constant * scale, dict(self.meta))

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.coeffs.items())), self.constant)

    def frozen(self) -> tuple:
        return (frozenset(self.coeffs.items()), self.constant)

    def to_dict(self) -> dict:
        return {
            "coeffs": [{"k": k, "s": s, "t": t, "gamma": format_rational(g)}
                       for (k, s, t), g in self.coeffs.items()],
            "constant": format_rational(self.constant),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NcInequality":
        coeffs = {(str(r["k"]), str(r["s"]), str(r["t"])): to_fraction(r["gamma"])
                  for r in data["coeffs"]}
        return cls(coeffs, to_fraction(data.get("constant", "0")))


def witness_to_inequality(r: CertResult, p: NcProgram) -> NcInequality:
    """Read the violated inequality off a Farkas witness.

    Coefficients are the witness entries on data rows (times the data
    scale); the constant collects the witness entries on normalization rows.
    """
    if r.feasible:
        raise ValueError("feasible results carry no witness")
    coeffs: dict[Key, Fraction] = {}
    constant = Fraction(0)
    for y, tag, i in zip(r.witness, p.row_tags, range(len(p.row_tags))):
        if tag[0] == "data":
            coeffs[tag[1:]] = coeffs.get(tag[1:], Fraction(0)) + y * p.data_scale
        else:
            constant += y * p.constant_rhs(i)
    return NcInequality(coeffs, constant)


def evaluate(ineq: NcInequality, data: DataTable) -> Fraction:
    """The linear part ``sum(gamma * p)``, without the constant."""
    return ineq.lhs(data)


def bound_point(ineq: NcInequality, skeleton: NcProgram) -> tuple[Fraction, Vector]:
    """Minimum of ``sum(gamma * p)`` over classical tables, with a minimizing ``x``."""
    a_eq, b_eq = skeleton.classical_table_constraints()
    n = len(skeleton.col_index)
    cost = [Fraction(0)] * n
    unknown = set(ineq.coeffs) - set(skeleton.data_keys)
    if unknown:
        raise ScenarioError(f"inequality refers to keys outside the scenario: {sorted(unknown)[:3]}")
    for i in skeleton.data_rows():
        g = ineq.coeffs.get(skeleton.row_tags[i][1:])
        if g:
            factor = g / skeleton.data_scale
            for j, v in enumerate(skeleton.M[i]):
                if v:
                    cost[j] += factor * v
    res = solve_lp(cost, a_eq, b_eq)
    if res.status == UNBOUNDED:
        raise RuntimeError("bound LP unbounded; the constraint set should be a polytope")
    if res.status != OPTIMAL:
        raise RuntimeError("scenario admits no classical model at all")
    return res.value, res.x


def nc_bound(ineq: NcInequality, skeleton: NcProgram) -> Fraction:
    """Minimum of ``sum(gamma * p)`` over all noncontextually explainable data tables."""
    return bound_point(ineq, skeleton)[0]


def table_from_solution(x: Sequence, skeleton: NcProgram) -> DataTable:
    """The data table a program solution ``x`` reproduces."""
    effect_ids = list(dict.fromkeys(k for k, _, _ in skeleton.data_keys))
    state_ids = list(dict.fromkeys(s for _, s, _ in skeleton.data_keys))
    entries = {skeleton.row_tags[i][1:]: dot(skeleton.M[i], x) / skeleton.data_scale
               for i in skeleton.data_rows()}
    return DataTable(effect_ids, state_ids, list(skeleton.transformation_ids), entries)


def program_for(f: GptFragment, data: DataTable | None = None, flag: bool = False):
    """Identities, vertex sets and program for a fragment in one call."""
    from .identities import all_identities
    from .polytopes import enumerate_vertices, measurement_polytope, source_polytope

    ids = all_identities(f)
    phi = enumerate_vertices(measurement_polytope(f, ids["effects"]))
    psi = enumerate_vertices(source_polytope(f, ids["states"]))
    skeleton = build_skeleton(phi, psi, ids["transformations"], f.N, flag=flag)
    prog = skeleton.with_data(data) if data is not None else skeleton
    return ids, phi, psi, prog
