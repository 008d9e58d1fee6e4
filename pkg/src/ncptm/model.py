"""Candidate ontological models read off a feasible program solution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .fragment import DataTable, GptFragment
from .identities import IdentitySet
from .linalg import format_rational, to_fraction
from .polytopes import VRep


class ModelError(ValueError):
    pass


@dataclass
class OntModel:
    ontic_in: list[int]
    ontic_out: list[int]
    mu: dict[tuple[str, int], Fraction]
    gamma: dict[tuple[str, int, int], Fraction]
    xi: dict[tuple[str, int], Fraction]
    p_kappa: dict[int, Fraction]

    def probability(self, k: str, s: str, t: str) -> Fraction:
        return sum((self.xi[(k, a)] * self.gamma[(t, a, c)] * self.mu[(s, c)]
                    for c in self.ontic_in for a in self.ontic_out), Fraction(0))

    def to_dict(self) -> dict:
        f = format_rational
        return {
            "ontic_in": self.ontic_in,
            "ontic_out": self.ontic_out,
            "mu": [{"s": s, "kappa": c, "value": f(v)} for (s, c), v in self.mu.items()],
            "gamma": [{"t": t, "kappa_out": a, "kappa": c, "value": f(v)}
                      for (t, a, c), v in self.gamma.items()],
            "xi": [{"k": k, "kappa_out": a, "value": f(v)} for (k, a), v in self.xi.items()],
            "p_kappa": {str(c): f(v) for c, v in self.p_kappa.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OntModel":
        q = to_fraction
        return cls(
            ontic_in=list(data["ontic_in"]),
            ontic_out=list(data["ontic_out"]),
            mu={(r["s"], r["kappa"]): q(r["value"]) for r in data["mu"]},
            gamma={(r["t"], r["kappa_out"], r["kappa"]): q(r["value"]) for r in data["gamma"]},
            xi={(r["k"], r["kappa_out"]): q(r["value"]) for r in data["xi"]},
            p_kappa={int(c): q(v) for c, v in data["p_kappa"].items()},
        )


def build(x: Sequence, phi: VRep, psi: VRep, N: int, transformation_ids: Sequence[str]) -> OntModel:
    """Undo the Bayesian inversion behind the program's unknowns.

    ``x`` is indexed like the program's columns: measurement vertex
    outermost, then source vertex, then transformation.  Source vertices
    carrying no weight are dropped from the ontic state space.
    """
    n_out, n_in = len(phi.vertices), len(psi.vertices)
    tids = list(transformation_ids)
    if len(x) != n_out * n_in * len(tids):
        raise ModelError("solution length does not match the vertex sets")
    weight = {col: to_fraction(v) for col, v in zip(product(range(n_out), range(n_in), tids), x)}

    p_kappa = {}
    for c in range(n_in):
        marginals = {sum((weight[(a, c, t)] for a in range(n_out)), Fraction(0)) for t in tids}
        if len(marginals) != 1:
            raise ModelError(f"marginal of source vertex {c} depends on the transformation")
        p_kappa[c] = marginals.pop()
    ontic_in = [c for c in range(n_in) if p_kappa[c] > 0]
    ontic_out = list(range(n_out))

    mu = {(s, c): N * psi.vertices[c][i] * p_kappa[c]
          for i, s in enumerate(psi.var_labels) for c in ontic_in}
    gamma = {(t, a, c): weight[(a, c, t)] / p_kappa[c]
             for t in tids for a in ontic_out for c in ontic_in}
    xi = {(k, a): phi.vertices[a][i] for i, k in enumerate(phi.var_labels) for a in ontic_out}
    return OntModel(ontic_in, ontic_out, mu, gamma, xi, {c: p_kappa[c] for c in ontic_in})


def _check(name: str, failures: list[str]) -> dict:
    return {"check": name, "passed": not failures, "failures": failures[:20]}


def verify(m: OntModel, f: GptFragment, data: DataTable, ids: dict[str, IdentitySet]) -> dict:
    """Exact pass/fail for each property the construction should guarantee.

    Diagram preservation (e.g. the identity map represented by the
    identity) is outside what the program enforces and is only flagged.
    """
    zero = Fraction(0)
    kin, kout = m.ontic_in, m.ontic_out

    repro = []
    for key in data.keys():
        got = m.probability(*key)
        if got != data[key]:
            repro.append(f"{key}: model gives {got}, data {data[key]}")

    state_ids = ids["states"]
    st = []
    for a, gen in enumerate(state_ids.generators):
        for c in kin:
            total = sum((al * m.mu[(s, c)] for s, al in zip(state_ids.process_ids, gen)), zero)
            if total:
                st.append(f"generator {a}, kappa {c}: {total}")

    effect_ids = ids["effects"]
    ef = []
    for b, gen in enumerate(effect_ids.generators):
        for a in kout:
            total = sum((al * m.xi[(k, a)] for k, al in zip(effect_ids.process_ids, gen)), zero)
            if total:
                ef.append(f"generator {b}, kappa' {a}: {total}")

    t_ids = ids["transformations"]
    tr = []
    for g, gen in enumerate(t_ids.generators):
        for a, c in product(kout, kin):
            total = sum((al * m.gamma[(t, a, c)] for t, al in zip(t_ids.process_ids, gen)), zero)
            if total:
                tr.append(f"generator {g}, kappa' {a}, kappa {c}: {total}")

    dist = []
    for s in f.state_ids:
        vals = [m.mu[(s, c)] for c in kin]
        if any(v < 0 for v in vals) or sum(vals, zero) != 1:
            dist.append(f"mu_{s} is not a distribution (sum {sum(vals, zero)})")
    for t in f.transformation_ids:
        for c in kin:
            vals = [m.gamma[(t, a, c)] for a in kout]
            if any(v < 0 for v in vals) or sum(vals, zero) != 1:
                dist.append(f"Gamma_{t}(.|{c}) is not a distribution")
    for (k, a), v in m.xi.items():
        if not 0 <= v <= 1:
            dist.append(f"xi_{k}({a}) = {v} outside [0, 1]")
    for meas in f.measurements:
        for a in kout:
            total = sum((m.xi[(k, a)] for k in meas), zero)
            if total != 1:
                dist.append(f"measurement {list(meas)} sums to {total} at kappa' {a}")

    checks = [
        _check("data-reproduction", repro),
        _check("state-identities", st),
        _check("effect-identities", ef),
        _check("transformation-identities", tr),
        _check("distributions", dist),
    ]
    return {
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "flags": ["diagram-preservation not verified"],
    }
