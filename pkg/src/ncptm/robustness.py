"""Noise-robustness threshold by exact bisection along a mixing segment."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fragment import DataTable, ScenarioError
from .linalg import to_fraction
from .program import NcProgram, certify


@dataclass
class RobustnessResult:
    r_lo: Fraction
    r_hi: Fraction
    probes: list[tuple[Fraction, bool]] = field(default_factory=list)

    @property
    def width(self) -> Fraction:
        return self.r_hi - self.r_lo

    def interval_property_holds(self) -> bool:
        """No probed infeasible point lies above a probed feasible one."""
        feasible = [r for r, ok in self.probes if ok]
        infeasible = [r for r, ok in self.probes if not ok]
        return not feasible or not infeasible or max(infeasible) < min(feasible)

    def to_dict(self) -> dict:
        from .linalg import format_rational as f
        return {
            "r_lo": f(self.r_lo),
            "r_hi": f(self.r_hi),
            "width": f(self.width),
            "probes": [{"r": f(r), "feasible": ok} for r, ok in self.probes],
            "interval_property": self.interval_property_holds(),
        }


class MonotonicityError(RuntimeError):
    pass


def robustness(skeleton: NcProgram, data: DataTable, target: DataTable,
               precision=Fraction(1, 1024)) -> RobustnessResult:
    """Bracket the smallest mixing weight ``r`` making ``(1-r) data + r target`` classical.

    Every probe is certified exactly.  The feasible part of the segment is
    an interval ending at ``r = 1`` by convexity; a probe contradicting
    that raises ``MonotonicityError``.
    """
    precision = to_fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    probes: list[tuple[Fraction, bool]] = []

    def feasible(r: Fraction) -> bool:
        ok = certify(skeleton.with_data(data.mix(target, r))).feasible
        probes.append((r, ok))
        if ok and any(not o and q > r for q, o in probes):
            raise MonotonicityError(f"feasible at r={r} but infeasible above it")
        if not ok and any(o and q < r for q, o in probes):
            raise MonotonicityError(f"infeasible at r={r} but feasible below it")
        return ok

    lo, hi = Fraction(0), Fraction(1)
    if feasible(lo):
        raise ScenarioError("data is already classical; nothing to bracket")
    if not feasible(hi):
        raise ScenarioError("mixing target is not classical")
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return RobustnessResult(lo, hi, probes)
