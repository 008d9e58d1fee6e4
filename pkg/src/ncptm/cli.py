"""Command-line front end.

Exit status: 0 success, 1 nonclassical verdict, 2 input error,
3 row budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .elimination import DEFAULT_ROW_BUDGET, RowBudgetExceeded, eliminate, system_for
from .fragment import (
    PAULI_TRANSFER,
    DataTable,
    ScenarioError,
    fragment_to_dict,
    load_fragment,
    load_table,
    lump,
    predict,
    square_fragment,
    stabilizer_qubit_fragment,
    table_to_dict,
)
from .identities import find_identities, KINDS
from .linalg import format_rational, matrix, parse_rational
from .model import build, verify
from .polytopes import (
    EmptyPolytopeError,
    UnboundedPolytopeError,
    enumerate_vertices,
    measurement_polytope,
    source_polytope,
)
from .program import NcInequality, certify, nc_bound, program_for, witness_to_inequality
from .robustness import MonotonicityError, robustness
from .sampling import sample_tables

EXIT_OK, EXIT_NONCLASSICAL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
EXAMPLES = {"stabilizer-qubit": stabilizer_qubit_fragment, "square": square_fragment}


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    kind: str | None = None
    which: str = "measurement"
    row_budget: int = DEFAULT_ROW_BUDGET
    precision: Fraction = Fraction(1, 1024)
    seed: int = 0
    flag: bool = False
    check: int = 0
    target: str | None = None
    name: str = "stabilizer-qubit"


class InputError(ValueError):
    pass


def _load_ineq(path: str) -> NcInequality:
    try:
        return NcInequality.from_dict(json.loads(Path(path).read_text()))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed inequality ({exc})") from exc


def _need(cfg: RunConfig, n: int, names: str) -> list[str]:
    if len(cfg.inputs) != n:
        raise InputError(f"{cfg.command} expects {names}")
    for p in cfg.inputs:
        if not Path(p).is_file():
            raise InputError(f"no such file: {p}")
    return cfg.inputs


def _identities(cfg):
    (scen,) = _need(cfg, 1, "SCENARIO")
    f = load_fragment(scen)
    kinds = [cfg.kind] if cfg.kind else list(KINDS)
    out = [find_identities(f, k).to_dict() for k in kinds]
    return EXIT_OK, out[0] if cfg.kind else out


def _polytope(cfg):
    (scen,) = _need(cfg, 1, "SCENARIO")
    f = load_fragment(scen)
    if cfg.which == "measurement":
        h = measurement_polytope(f, find_identities(f, "effects"))
    else:
        h = source_polytope(f, find_identities(f, "states"))
    return EXIT_OK, enumerate_vertices(h).to_dict()


def _certify(cfg):
    scen, data = _need(cfg, 2, "SCENARIO DATA")
    f = load_fragment(scen)
    table = load_table(data, f)
    _, _, _, prog = program_for(f, table, flag=cfg.flag)
    r = certify(prog)
    if r.feasible:
        return EXIT_OK, {"verdict": "feasible", "x": [format_rational(v) for v in r.x]}
    ineq = witness_to_inequality(r, prog)
    return EXIT_NONCLASSICAL, {
        "verdict": "infeasible",
        "witness_inequality": ineq.to_dict(),
        "violation": format_rational(r.witness_value),
    }


def _enumerate(cfg):
    (scen,) = _need(cfg, 1, "SCENARIO")
    f = load_fragment(scen)
    try:
        res = eliminate(system_for(f, flag=cfg.flag), row_budget=cfg.row_budget)
    except RowBudgetExceeded as exc:
        return EXIT_BUDGET, {
            "inequalities": [i.to_dict() for i in exc.partial],
            "complete": False,
            "diagnostics": {"row_budget": cfg.row_budget, "generated": exc.generated,
                            "message": str(exc)},
        }
    out = {
        "inequalities": [i.to_dict() for i in res.all_inequalities()],
        "complete": True,
        "diagnostics": {"row_budget": cfg.row_budget, "generated": res.generated,
                        "peak_rows": res.peak_rows, "equalities": len(res.equalities)},
    }
    if cfg.check:
        _, _, _, skeleton = program_for(f)
        tables = sample_tables(f, skeleton, cfg.check, seed=cfg.seed)
        agree = sum(certify(skeleton.with_data(t)).feasible == res.holds(_flagged(t, f.N, cfg.flag))
                    for t in tables)
        out["diagnostics"]["oracle_check"] = {"samples": len(tables), "agree": agree,
                                              "seed": cfg.seed}
    return EXIT_OK, out


def _flagged(t: DataTable, N: int, flag: bool) -> DataTable:
    """The same table over the flag-convexified symbols ``p(k|s,t) / N``."""
    if not flag:
        return t
    return DataTable(t.effect_ids, t.state_ids, t.transformation_ids,
                     {k: v / N for k, v in t.entries.items()})


def _evaluate(cfg):
    ineq_path, data = _need(cfg, 2, "INEQUALITY DATA")
    ineq = _load_ineq(ineq_path)
    table = load_table(data)
    try:
        beta = ineq.lhs(table)
    except KeyError as exc:
        raise InputError(str(exc)) from exc
    return EXIT_OK, {"beta": format_rational(beta), "constant": format_rational(ineq.constant),
                     "satisfied": beta + ineq.constant >= 0}


def _bound(cfg):
    scen, ineq_path = _need(cfg, 2, "SCENARIO INEQUALITY")
    f = load_fragment(scen)
    _, _, _, skeleton = program_for(f)
    ineq = _load_ineq(ineq_path)
    b = nc_bound(ineq, skeleton)
    return EXIT_OK, {"bound": format_rational(b), "constant": format_rational(ineq.constant),
                     "valid": b + ineq.constant >= 0}


def _model(cfg):
    scen, data = _need(cfg, 2, "SCENARIO DATA")
    f = load_fragment(scen)
    table = load_table(data, f)
    ids, phi, psi, prog = program_for(f, table)
    r = certify(prog)
    if not r.feasible:
        return EXIT_NONCLASSICAL, {"verdict": "infeasible",
                                   "violation": format_rational(r.witness_value)}
    m = build(r.x, phi, psi, f.N, prog.transformation_ids)
    return EXIT_OK, {"verdict": "feasible", "model": m.to_dict(),
                     "verification": verify(m, f, table, ids)}


def _stage(items, base):
    out = []
    for item in items:
        tid = item["id"]
        if "matrix" in item:
            out.append((tid, matrix(item["matrix"])))
        elif tid in base.transformation_ids:
            out.append((tid, base.transformation(tid)))
        elif tid in PAULI_TRANSFER and base.dim == 4:
            out.append((tid, PAULI_TRANSFER[tid]))
        else:
            raise InputError(f"transformation {tid!r} has no matrix")
    return out


def _lump(cfg):
    scen, stages = _need(cfg, 2, "SCENARIO STAGES")
    f = load_fragment(scen)
    try:
        doc = json.loads(Path(stages).read_text())
        first, second = _stage(doc["first"], f), _stage(doc["second"], f)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"{stages}: malformed stages file ({exc})") from exc
    res = lump(first, second, f)
    return EXIT_OK, {"scenario": fragment_to_dict(res.fragment), "merged": res.merged}


def _example(cfg):
    if cfg.inputs:
        raise InputError("example takes no input files")
    try:
        f = EXAMPLES[cfg.name]()
    except KeyError:
        raise InputError(f"unknown example {cfg.name!r}; choose from {sorted(EXAMPLES)}") from None
    scenario, data = fragment_to_dict(f), table_to_dict(predict(f))
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "scenario.json").write_text(json.dumps(scenario, indent=2))
        (out / "data.json").write_text(json.dumps(data, indent=2))
        return EXIT_OK, None
    return EXIT_OK, {"scenario": scenario, "data": data}


def _robustness(cfg):
    scen, data = _need(cfg, 2, "SCENARIO DATA")
    f = load_fragment(scen)
    table = load_table(data, f)
    target = load_table(cfg.target, f) if cfg.target else DataTable.constant(f, Fraction(1, 2))
    if not cfg.target and any(len(m) != 2 for m in f.measurements):
        raise InputError("default target is the 1/2 table, which needs binary measurements")
    _, _, _, skeleton = program_for(f)
    try:
        res = robustness(skeleton, table, target, cfg.precision)
    except MonotonicityError as exc:
        raise InputError(str(exc)) from exc
    return EXIT_OK, res.to_dict()


COMMANDS = {
    "identities": _identities,
    "polytope": _polytope,
    "certify": _certify,
    "enumerate-inequalities": _enumerate,
    "evaluate": _evaluate,
    "bound": _bound,
    "model": _model,
    "lump": _lump,
    "example": _example,
    "robustness": _robustness,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; the JSON result goes to ``cfg.out`` or stdout."""
    try:
        code, payload = COMMANDS[cfg.command](cfg)
    except RowBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ScenarioError, EmptyPolytopeError, UnboundedPolytopeError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if payload is not None:
        text = json.dumps(payload, indent=2)
        if cfg.out:
            Path(cfg.out).write_text(text + "\n")
        else:
            print(text)
    return code


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncptm", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, inputs, help_):
        sp = sub.add_parser(name, help=help_)
        if inputs:
            sp.add_argument("inputs", nargs="*", metavar=inputs)
        sp.add_argument("--out", help="write JSON here instead of stdout")
        return sp

    sp = cmd("identities", "SCENARIO", "generating operational identities")
    sp.add_argument("--kind", choices=KINDS)
    sp = cmd("polytope", "SCENARIO", "vertices of an assignment polytope")
    sp.add_argument("--which", choices=("measurement", "source"), default="measurement")
    sp = cmd("certify", "FILE", "feasibility verdict with model point or witness")
    sp.add_argument("--flag", action="store_true", help="use the flag-convexified program")
    sp = cmd("enumerate-inequalities", "SCENARIO", "all inequalities by elimination")
    sp.add_argument("--row-budget", type=int, default=DEFAULT_ROW_BUDGET)
    sp.add_argument("--flag", action="store_true", help="symbols are p(k, s | t) = p(k|s,t)/N")
    sp.add_argument("--check", type=int, default=0, metavar="N",
                    help="cross-check against certify on N random tables")
    sp.add_argument("--seed", type=int, default=0)
    cmd("evaluate", "FILE", "evaluate an inequality on a data table")
    cmd("bound", "FILE", "classical bound of an inequality")
    cmd("model", "FILE", "build and verify a classical model")
    cmd("lump", "FILE", "compose two transformation stages")
    sp = cmd("example", None, "write a built-in scenario and its predicted data")
    sp.add_argument("name", nargs="?", default="stabilizer-qubit", choices=sorted(EXAMPLES))
    sp = cmd("robustness", "FILE", "bracket the mixing threshold towards a classical table")
    sp.add_argument("--precision", type=parse_rational, default=Fraction(1, 1024))
    sp.add_argument("--target", help="classical mixing target (default: every entry 1/2)")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    known = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return run(RunConfig(**known))


if __name__ == "__main__":
    sys.exit(main())
