"""Seeded random data tables with exact rational entries."""

from __future__ import annotations

import random
from fractions import Fraction

from .fragment import DataTable, GptFragment, predict
from .linalg import dot
from .program import NcInequality, NcProgram, bound_point, table_from_solution


def _rational(rng: random.Random, denominator: int = 64) -> Fraction:
    return Fraction(rng.randint(0, denominator), denominator)


def classical_table(skeleton: NcProgram, rng: random.Random, mixtures: int = 3) -> DataTable:
    """Convex mixture of classical tables that minimize random linear functionals."""
    tables = []
    for _ in range(mixtures):
        gamma = {key: Fraction(rng.randint(-4, 4)) for key in skeleton.data_keys}
        _, x = bound_point(NcInequality(gamma), skeleton)
        tables.append(table_from_solution(x, skeleton))
    out = tables[0]
    for i, t in enumerate(tables[1:], start=2):
        out = out.mix(t, Fraction(1, i))
    return out


def gpt_table(f: GptFragment, rng: random.Random) -> DataTable:
    """Prediction of ``f`` with its effects replaced by random valid ones.

    For every measurement the new effects still sum to the unit effect, so
    the table is normalized and respects every state identity; effect
    identities are generally broken.
    """
    d = f.dim
    states = [v for _, v in f.states]
    maps = [m for _, m in f.transformations]
    images = [tuple(dot(row, w) for row in m) for m in maps for w in states]
    effects = {}
    for meas in f.measurements:
        size = len(meas)
        raw = [[Fraction(rng.randint(-8, 8)) for _ in range(d)] for _ in meas]
        mean = [sum(col, Fraction(0)) / size for col in zip(*raw)]
        dirs = [[a - b for a, b in zip(v, mean)] for v in raw]
        base = [u / size for u in f.unit_effect]
        # largest step keeping every probability inside [0, 1]
        limit = None
        for v in dirs:
            for img in images:
                p0, dp = dot(base, img), dot(v, img)
                if dp > 0:
                    cap = (1 - p0) / dp
                elif dp < 0:
                    cap = -p0 / dp
                else:
                    continue
                limit = cap if limit is None else min(limit, cap)
        step = (limit or Fraction(0)) * Fraction(rng.randint(1, 16), 16)
        for k, v in zip(meas, dirs):
            effects[k] = tuple(b + step * x for b, x in zip(base, v))
    g = GptFragment.create(f.dim, f.states, [(k, effects[k]) for k, _ in f.effects],
                           f.unit_effect, f.transformations, f.measurements)
    return predict(g)


def uniform_table(f: GptFragment, rng: random.Random, denominator: int = 64) -> DataTable:
    """Independent random entries, normalized within each binary measurement."""
    table = DataTable.constant(f, 0)
    for s in f.state_ids:
        for t in f.transformation_ids:
            for meas in f.measurements:
                remaining = Fraction(1)
                for k in meas[:-1]:
                    p = remaining * _rational(rng, denominator)
                    table.entries[(k, s, t)] = p
                    remaining -= p
                table.entries[(meas[-1], s, t)] = remaining
    return table


def sample_tables(f: GptFragment, skeleton: NcProgram, count: int, seed: int = 0) -> list[DataTable]:
    """A reproducible mix of classical, GPT-valid, boundary-straddling and unconstrained tables."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            out.append(classical_table(skeleton, rng))
        elif kind == 1:
            out.append(gpt_table(f, rng))
        elif kind == 2:
            a, b = classical_table(skeleton, rng), gpt_table(f, rng)
            out.append(a.mix(b, _rational(rng, 32)))
        else:
            out.append(uniform_table(f, rng))
    return out
