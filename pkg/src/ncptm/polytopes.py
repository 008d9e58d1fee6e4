"""Measurement- and source-assignment polytopes and their vertices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .fragment import GptFragment
from .identities import IdentitySet
from .linalg import (
    Vector,
    dot,
    format_rational,
    kernel_basis,
    rank,
    solve_linear,
    to_fraction,
    vector,
)
from .lp import OPTIMAL, UNBOUNDED, solve_lp, solve_lp_free


class EmptyPolytopeError(ValueError):
    pass


class UnboundedPolytopeError(ValueError):
    pass


Constraint = tuple[Vector, Fraction]


@dataclass(frozen=True)
class HPolytope:
    """``{x : a.x = b for equalities, a.x >= b for inequalities}``."""

    num_vars: int
    equalities: tuple[Constraint, ...] = ()
    inequalities: tuple[Constraint, ...] = ()
    var_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for a, _ in (*self.equalities, *self.inequalities):
            if len(a) != self.num_vars:
                raise ValueError(f"constraint of length {len(a)} in a {self.num_vars}-variable polytope")
        if self.var_labels and len(self.var_labels) != self.num_vars:
            raise ValueError("one label per variable")

    @classmethod
    def create(cls, num_vars, equalities=(), inequalities=(), var_labels=()):
        eqs = tuple((vector(a), to_fraction(b)) for a, b in equalities)
        ineqs = tuple((vector(a), to_fraction(b)) for a, b in inequalities)
        labels = tuple(var_labels) or tuple(f"x{i}" for i in range(num_vars))
        return cls(num_vars, eqs, ineqs, labels)

    def contains(self, x: Sequence) -> bool:
        return (all(dot(a, x) == b for a, b in self.equalities)
                and all(dot(a, x) >= b for a, b in self.inequalities))

    def active_rank(self, x: Sequence) -> int:
        rows = [a for a, _ in self.equalities] + [a for a, b in self.inequalities if dot(a, x) == b]
        return rank(rows) if rows else 0

    def is_vertex(self, x: Sequence) -> bool:
        return self.contains(x) and self.active_rank(x) == self.num_vars


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Vector, ...]
    var_labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"labels": list(self.var_labels),
                "vertices": [[format_rational(x) for x in v] for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> "VRep":
        return cls(tuple(vector(v) for v in data["vertices"]), tuple(data["labels"]))


def measurement_polytope(f: GptFragment, ids: IdentitySet) -> HPolytope:
    """Valid response-function assignments to the listed effects.

    Normalization appears as one sum-to-one row per measurement, which is
    equivalent to fixing the unit effect's value to 1.
    """
    if ids.kind != "effects":
        raise ValueError("measurement polytope needs effect identities")
    if list(ids.process_ids) != f.effect_ids:
        raise ValueError("identity set does not match the fragment's effects")
    labels = f.effect_ids
    n = len(labels)
    pos = {k: i for i, k in enumerate(labels)}
    eqs = []
    for meas in f.measurements:
        row = [0] * n
        for k in meas:
            row[pos[k]] += 1
        eqs.append((row, 1))
    eqs.extend((g, 0) for g in ids.generators)
    ineqs = [([int(i == j) for j in range(n)], 0) for i in range(n)]
    return HPolytope.create(n, eqs, ineqs, labels)


def source_polytope(f: GptFragment, ids: IdentitySet) -> HPolytope:
    """Valid retrodictive assignments to the source outcomes (one per state)."""
    if ids.kind != "states":
        raise ValueError("source polytope needs state identities")
    if list(ids.process_ids) != f.state_ids:
        raise ValueError("identity set does not match the fragment's states")
    n = f.N
    eqs = [([1] * n, 1)]
    eqs.extend((g, 0) for g in ids.generators)
    ineqs = [([int(i == j) for j in range(n)], 0) for i in range(n)]
    return HPolytope.create(n, eqs, ineqs, f.state_ids)


def _affine_hull(p: HPolytope) -> tuple[Vector, list[Vector]]:
    """A point and direction basis of the equality-constrained affine space."""
    n = p.num_vars
    if not p.equalities:
        return tuple(Fraction(0) for _ in range(n)), kernel_basis([], cols=n)
    a = [row for row, _ in p.equalities]
    b = [rhs for _, rhs in p.equalities]
    x0 = solve_linear(a, b)
    if x0 is None:
        raise EmptyPolytopeError("equality constraints are inconsistent")
    return x0, kernel_basis(a)


def _check_bounded(g: list[Vector], h: list[Fraction], dims: int) -> None:
    for i in range(dims):
        for sign in (1, -1):
            c = [Fraction(0)] * dims
            c[i] = Fraction(sign)
            res = solve_lp_free(c, g, h)
            if res.status == UNBOUNDED:
                raise UnboundedPolytopeError("polytope is unbounded")


def enumerate_vertices(p: HPolytope) -> VRep:
    """All vertices, by exhaustive enumeration of basic solutions.

    Works in coordinates of the affine hull of the equalities: every choice
    of ``dim`` inequalities with independent normals is solved exactly, and
    the feasible solutions are kept.  Output is deduplicated and sorted.
    """
    x0, directions = _affine_hull(p)
    dims = len(directions)
    # inequality a.x >= b becomes (a.Z) t >= b - a.x0
    g = [tuple(dot(a, z) for z in directions) for a, _ in p.inequalities]
    h = [b - dot(a, x0) for a, b in p.inequalities]

    def lift(t):
        return tuple(x0[i] + sum((tj * z[i] for tj, z in zip(t, directions)), Fraction(0))
                     for i in range(p.num_vars))

    found: set[Vector] = set()
    if dims == 0:
        if all(hv <= 0 for hv in h):
            found.add(tuple(x0))
    else:
        for subset in combinations(range(len(g)), dims):
            rows = [g[i] for i in subset]
            if rank(rows) < dims:
                continue
            t = solve_linear(rows, [h[i] for i in subset])
            if all(dot(gi, t) >= hi for gi, hi in zip(g, h)):
                found.add(lift(t))

    if not found:
        if dims and solve_lp_free([0] * dims, g, h).status == OPTIMAL:
            raise UnboundedPolytopeError("feasible region has no vertices")
        raise EmptyPolytopeError("polytope is empty")
    if dims:
        _check_bounded(g, h, dims)
    return VRep(tuple(sorted(found)), tuple(p.var_labels))


def convex_weights(point: Sequence, vertices: Sequence[Sequence]) -> Vector | None:
    """Convex weights expressing ``point`` over ``vertices``, or None."""
    n = len(point)
    rows = [[v[i] for v in vertices] for i in range(n)] + [[1] * len(vertices)]
    rhs = list(point) + [1]
    res = solve_lp([0] * len(vertices), rows, rhs)
    return res.x if res.status == OPTIMAL else None
