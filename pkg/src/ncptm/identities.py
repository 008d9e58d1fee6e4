"""Generating sets of linear operational identities.

Each finder stacks the process vectors as columns and returns a kernel
basis of that matrix: every linear relation among the processes is a
rational combination of the returned coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fragment import GptFragment
from .linalg import Vector, format_rational, kernel_basis, transpose, vector

KINDS = ("states", "effects", "transformations")


@dataclass(frozen=True)
class IdentitySet:
    kind: str
    process_ids: tuple[str, ...]
    generators: tuple[Vector, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown identity kind {self.kind!r}")
        for g in self.generators:
            if len(g) != len(self.process_ids):
                raise ValueError("generator length does not match process count")

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ids": list(self.process_ids),
            "generators": [[format_rational(x) for x in g] for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IdentitySet":
        return cls(data["kind"], tuple(data["ids"]), tuple(vector(g) for g in data["generators"]))


def _identities(kind: str, ids: Sequence[str], columns: Sequence[Sequence]) -> IdentitySet:
    # columns -> matrix whose i-th column is process i
    m = transpose(columns)
    return IdentitySet(kind, tuple(ids), tuple(kernel_basis(m, cols=len(ids))))


def state_identities(f: GptFragment) -> IdentitySet:
    return _identities("states", f.state_ids, [v for _, v in f.states])


def effect_identities(f: GptFragment) -> IdentitySet:
    """Identities among the listed effects only; the unit effect is not a column."""
    return _identities("effects", f.effect_ids, [v for _, v in f.effects])


def vectorize(m: Sequence[Sequence]) -> Vector:
    """Column-stacking vectorization of a square matrix."""
    return tuple(x for col in zip(*m) for x in col)


def transformation_identities(f: GptFragment) -> IdentitySet:
    return _identities("transformations", f.transformation_ids,
                       [vectorize(m) for _, m in f.transformations])


def all_identities(f: GptFragment) -> dict[str, IdentitySet]:
    return {
        "states": state_identities(f),
        "effects": effect_identities(f),
        "transformations": transformation_identities(f),
    }


def find_identities(f: GptFragment, kind: str) -> IdentitySet:
    finders = {"states": state_identities, "effects": effect_identities,
               "transformations": transformation_identities}
    try:
        return finders[kind](f)
    except KeyError:
        raise ValueError(f"unknown identity kind {kind!r}") from None
