"""GPT fragments of prepare-transform-measure scenarios.

States and effects are stored as coordinate vectors in one real chart;
the pairing ``e o w`` is the plain dot product and a transformation acts
by matrix-vector multiplication.  The built-in stabilizer fragment uses
the Pauli basis (1, X, Y, Z), in which every object is rational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .linalg import (
    Matrix,
    Vector,
    dot,
    format_rational,
    matmul,
    matrix,
    matvec,
    to_fraction,
    vector,
)

Key = tuple[str, str, str]  # (effect id, state id, transformation id)


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input."""


@dataclass(frozen=True)
class GptFragment:
    dim: int
    states: tuple[tuple[str, Vector], ...]
    effects: tuple[tuple[str, Vector], ...]
    unit_effect: Vector
    transformations: tuple[tuple[str, Matrix], ...]
    measurements: tuple[tuple[str, ...], ...]

    @classmethod
    def create(cls, dim, states, effects, unit_effect, transformations, measurements):
        """Build a fragment from loosely typed input (ints, strings, Fractions)."""
        return cls(
            dim=int(dim),
            states=tuple((str(i), vector(v)) for i, v in states),
            effects=tuple((str(i), vector(v)) for i, v in effects),
            unit_effect=vector(unit_effect),
            transformations=tuple((str(i), tuple(matrix(m))) for i, m in transformations),
            measurements=tuple(tuple(str(k) for k in meas) for meas in measurements),
        )

    @property
    def state_ids(self) -> list[str]:
        return [i for i, _ in self.states]

    @property
    def effect_ids(self) -> list[str]:
        return [i for i, _ in self.effects]

    @property
    def transformation_ids(self) -> list[str]:
        return [i for i, _ in self.transformations]

    @property
    def N(self) -> int:
        return len(self.states)

    def state(self, sid: str) -> Vector:
        return dict(self.states)[sid]

    def effect(self, kid: str) -> Vector:
        return dict(self.effects)[kid]

    def transformation(self, tid: str) -> Matrix:
        return dict(self.transformations)[tid]

    def with_transformations(self, transformations) -> "GptFragment":
        return GptFragment.create(self.dim, self.states, self.effects, self.unit_effect,
                                  transformations, self.measurements)


@dataclass
class DataTable:
    """Probabilities p(k|s,t) keyed by (effect id, state id, transformation id).

    Entries are not range-checked on construction so that arbitrary
    right-hand sides can be fed to the feasibility machinery; call
    :meth:`violations` to check that the table is a genuine data table.
    """

    effect_ids: list[str]
    state_ids: list[str]
    transformation_ids: list[str]
    entries: dict[Key, Fraction] = field(default_factory=dict)

    def keys(self) -> Iterator[Key]:
        return iter(table_keys(self.effect_ids, self.state_ids, self.transformation_ids))

    def __getitem__(self, key: Key) -> Fraction:
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    def missing(self) -> list[Key]:
        return [key for key in self.keys() if key not in self.entries]

    def violations(self, measurements: Iterable[Sequence[str]] = ()) -> list[str]:
        out = []
        for key in self.missing():
            out.append(f"missing entry {key}")
        for key, p in self.entries.items():
            if not 0 <= p <= 1:
                out.append(f"entry {key} = {p} outside [0, 1]")
        for meas in measurements:
            for s, t in product(self.state_ids, self.transformation_ids):
                total = sum(self.entries.get((k, s, t), Fraction(0)) for k in meas)
                if total != 1:
                    out.append(f"measurement {list(meas)} at (s={s}, t={t}) sums to {total}")
        return out

    def mix(self, other: "DataTable", r) -> "DataTable":
        """``(1 - r) * self + r * other``."""
        r = to_fraction(r)
        if other.keyset() != self.keyset():
            raise ScenarioError("cannot mix tables over different index sets")
        entries = {key: (1 - r) * self.entries[key] + r * other.entries[key] for key in self.keys()}
        return DataTable(list(self.effect_ids), list(self.state_ids),
                         list(self.transformation_ids), entries)

    def keyset(self) -> tuple:
        return (tuple(self.effect_ids), tuple(self.state_ids), tuple(self.transformation_ids))

    @classmethod
    def constant(cls, f: GptFragment, value) -> "DataTable":
        v = to_fraction(value)
        keys = table_keys(f.effect_ids, f.state_ids, f.transformation_ids)
        return cls(f.effect_ids, f.state_ids, f.transformation_ids, {key: v for key in keys})


def table_keys(effect_ids, state_ids, transformation_ids) -> list[Key]:
    return [(k, s, t) for k in effect_ids for s in state_ids for t in transformation_ids]


@dataclass
class ValidationReport:
    structural: list[str] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural and not self.violations

    def add(self, invariant: str, ids, message: str) -> None:
        self.violations.append({"invariant": invariant, "ids": list(ids), "message": message})

    def to_dict(self) -> dict:
        return {"ok": self.ok, "structural": self.structural,
                "violations": self.violations, "notes": self.notes}


def _structural_errors(f: GptFragment) -> list[str]:
    errs = []
    d = f.dim
    if d < 1:
        errs.append("dim must be positive")
    for kind, items in (("state", f.states), ("effect", f.effects)):
        ids = [i for i, _ in items]
        if len(set(ids)) != len(ids):
            errs.append(f"duplicate {kind} ids")
        for i, v in items:
            if len(v) != d:
                errs.append(f"{kind} {i!r} has length {len(v)}, expected {d}")
    if len(f.unit_effect) != d:
        errs.append(f"unit effect has length {len(f.unit_effect)}, expected {d}")
    tids = f.transformation_ids
    if len(set(tids)) != len(tids):
        errs.append("duplicate transformation ids")
    for t, m in f.transformations:
        if len(m) != d or any(len(row) != d for row in m):
            errs.append(f"transformation {t!r} is not {d}x{d}")
    known = set(f.effect_ids)
    for meas in f.measurements:
        for k in meas:
            if k not in known:
                errs.append(f"measurement {list(meas)} references unknown effect {k!r}")
    if not f.states or not f.effects or not f.transformations:
        errs.append("fragment needs at least one state, effect and transformation")
    return errs


def validate(f: GptFragment) -> ValidationReport:
    """Check the fragment against the GPT axioms it must satisfy.

    Tomographic completeness is not checked.  Transformations that do not
    preserve the unit effect are noted but not rejected.
    """
    report = ValidationReport(structural=_structural_errors(f))
    if report.structural:
        return report
    u = f.unit_effect
    for s, w in f.states:
        norm = dot(u, w)
        if norm != 1:
            report.add("normalization", [s], f"u o w = {norm}, expected 1")
    for (k, e), (s, w) in product(f.effects, f.states):
        p = dot(e, w)
        if not 0 <= p <= 1:
            report.add("effect-range", [k, s], f"e o w = {p} outside [0, 1]")
    effects = dict(f.effects)
    for meas in f.measurements:
        total = [sum((effects[k][i] for k in meas), Fraction(0)) for i in range(f.dim)]
        if tuple(total) != u:
            report.add("measurement-sum", list(meas), "measurement does not sum to unit")
    covered = {k for meas in f.measurements for k in meas}
    for k in f.effect_ids:
        if k not in covered:
            report.add("measurement-cover", [k], "effect belongs to no measurement")
    for t, m in f.transformations:
        images = {s: matvec(m, w) for s, w in f.states}
        for (k, e), s in product(f.effects, f.state_ids):
            p = dot(e, images[s])
            if not 0 <= p <= 1:
                report.add("probability-range", [k, s, t], f"e o T o w = {p} outside [0, 1]")
        if tuple(dot(u, col) for col in zip(*m)) != u:
            report.notes.append(f"transformation {t!r} is not discard-preserving")
    return report


def predict(f: GptFragment) -> DataTable:
    """Exact table p(k|s,t) = e_k o T_t o w_s."""
    entries = {}
    for t, m in f.transformations:
        for s, w in f.states:
            tw = matvec(m, w)
            for k, e in f.effects:
                entries[(k, s, t)] = dot(e, tw)
    return DataTable(f.effect_ids, f.state_ids, f.transformation_ids, entries)


STABILIZER_IDS = ("+", "-", "+y", "-y", "0", "1")
_BLOCH = {
    "+": (1, 0, 0), "-": (-1, 0, 0),
    "+y": (0, 1, 0), "-y": (0, -1, 0),
    "0": (0, 0, 1), "1": (0, 0, -1),
}
_HALF = Fraction(1, 2)

# Pauli transfer matrices in the (1, X, Y, Z) basis.
PAULI_TRANSFER = {
    "I": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    "Z": [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    "S": [[1, 0, 0, 0], [0, 0, -1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    "Sinv": [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 1]],
}


def stabilizer_qubit_fragment(transformations: Sequence[str] = ("I", "Z", "S", "Sinv")) -> GptFragment:
    """Single-qubit stabilizer states and effects with the given Clifford maps.

    States are ``(1, x, y, z)`` for Bloch vector ``(x, y, z)``; effects are
    the projectors onto the same states, ``(1, x, y, z) / 2``.
    """
    states = [(sid, (1, *_BLOCH[sid])) for sid in STABILIZER_IDS]
    effects = [(sid, tuple(_HALF * c for c in (1, *_BLOCH[sid]))) for sid in STABILIZER_IDS]
    return GptFragment.create(
        dim=4,
        states=states,
        effects=effects,
        unit_effect=(1, 0, 0, 0),
        transformations=[(t, PAULI_TRANSFER[t]) for t in transformations],
        measurements=[("+", "-"), ("+y", "-y"), ("0", "1")],
    )


def square_fragment(rotations: int = 2) -> GptFragment:
    """A small 3-dimensional toy: four square-gbit states, one binary measurement.

    The states obey a single identity ``s1 + s2 = s3 + s4``.  The
    transformations are the first ``rotations`` powers of a quarter turn,
    which are linearly independent for ``rotations <= 2``.
    """
    states = [("s1", (1, 1, 0)), ("s2", (1, -1, 0)), ("s3", (1, 0, 1)), ("s4", (1, 0, -1))]
    effects = [("e", (_HALF, _HALF, 0)), ("e_", (_HALF, -_HALF, 0))]
    quarter = matrix([[1, 0, 0], [0, 0, -1], [0, 1, 0]])
    power = matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    transformations = []
    for i in range(rotations):
        transformations.append((f"R{i}", power))
        power = matmul(quarter, power)
    return GptFragment.create(3, states, effects, (1, 0, 0), transformations, [("e", "e_")])


@dataclass(frozen=True)
class LumpResult:
    fragment: GptFragment
    merged: dict[str, str]


def lump(first: Sequence[tuple[str, Sequence]], second: Sequence[tuple[str, Sequence]],
         base: GptFragment) -> LumpResult:
    """Replace ``base``'s transformations by every composite ``T1 o T2``.

    ``T1`` comes from ``first`` and ``T2`` from ``second``, so ``T2`` acts
    first.  Composites are listed with the second-stage index outermost and
    named ``"t1∘t2"``.  Exact duplicates are merged into the earliest id;
    ``merged`` maps each dropped id to the id that absorbed it.
    """
    d = base.dim
    for tid, m in [*first, *second]:
        if len(m) != d or any(len(row) != d for row in m):
            raise ScenarioError(f"transformation {tid!r} is not {d}x{d}")
    kept: list[tuple[str, Matrix]] = []
    merged: dict[str, str] = {}
    seen: dict[tuple, str] = {}
    for t2, m2 in second:
        for t1, m1 in first:
            prod = tuple(matmul(matrix(m1), matrix(m2)))
            cid = f"{t1}∘{t2}"
            if prod in seen:
                merged[cid] = seen[prod]
            else:
                seen[prod] = cid
                kept.append((cid, prod))
    return LumpResult(base.with_transformations(kept), merged)


# JSON round trips

def fragment_to_dict(f: GptFragment) -> dict:
    fmt = lambda v: [format_rational(x) for x in v]  # noqa: E731
    return {
        "dim": f.dim,
        "states": [{"id": i, "vector": fmt(v)} for i, v in f.states],
        "effects": [{"id": i, "vector": fmt(v)} for i, v in f.effects],
        "unit_effect": fmt(f.unit_effect),
        "transformations": [{"id": i, "matrix": [fmt(r) for r in m]} for i, m in f.transformations],
        "measurements": [list(m) for m in f.measurements],
    }


def fragment_from_dict(data: dict) -> GptFragment:
    try:
        return GptFragment.create(
            dim=data["dim"],
            states=[(s["id"], s["vector"]) for s in data["states"]],
            effects=[(e["id"], e["vector"]) for e in data["effects"]],
            unit_effect=data["unit_effect"],
            transformations=[(t["id"], t["matrix"]) for t in data["transformations"]],
            measurements=data["measurements"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario: {exc}") from exc


def table_to_dict(table: DataTable) -> dict:
    return {
        "entries": [
            {"k": k, "s": s, "t": t, "p": format_rational(table.entries[(k, s, t)])}
            for (k, s, t) in table.keys() if (k, s, t) in table.entries
        ]
    }


def table_from_dict(data: dict, f: GptFragment | None = None) -> DataTable:
    """Parse a table; index order comes from ``f`` when given, else first appearance."""
    try:
        rows = data["entries"]
        entries = {(str(r["k"]), str(r["s"]), str(r["t"])): to_fraction(r["p"]) for r in rows}
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed data table: {exc}") from exc
    if f is not None:
        table = DataTable(f.effect_ids, f.state_ids, f.transformation_ids, entries)
        extra = set(entries) - set(table.keys())
        if extra:
            raise ScenarioError(f"data table has entries not in the scenario: {sorted(extra)[:3]}")
        if table.missing():
            raise ScenarioError(f"data table is missing entries, e.g. {table.missing()[0]}")
        return table
    order = lambda pos: list(dict.fromkeys(key[pos] for key in entries))  # noqa: E731
    return DataTable(order(0), order(1), order(2), entries)


def load_fragment(path) -> GptFragment:
    return fragment_from_dict(_read_json(path))


def load_table(path, f: GptFragment | None = None) -> DataTable:
    return table_from_dict(_read_json(path), f)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
