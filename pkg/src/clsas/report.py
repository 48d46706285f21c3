"""Verification reports: the uniform outcome record for every window check."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Counterexample:
    """One violated case: the input tuple plus both sides, exactly."""

    inputs: tuple  # tuple of int-tuples (group elements, or 1-tuples for t-degrees)
    lhs: object  # Scalar, Element, AffElement or plain string
    rhs: object

    def sort_key(self) -> tuple:
        return tuple(x for part in self.inputs for x in part)

    def to_dict(self, assignment: Optional[Mapping] = None) -> dict:
        return {
            "inputs": [list(part) for part in self.inputs],
            "lhs": _render_side(self.lhs, assignment),
            "rhs": _render_side(self.rhs, assignment),
        }


def _render_side(side, assignment: Optional[Mapping]) -> str:
    if isinstance(side, str):
        return side
    if assignment is not None and hasattr(side, "render_eval"):
        return side.render_eval(assignment)
    if hasattr(side, "render"):
        return side.render()
    return str(side)


@dataclass
class Report:
    """Outcome of verifying one identity system on a finite window."""

    identity: str
    rank: int
    radius: int
    cases_checked: int
    skipped: int
    passed: bool
    assumptions: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    t_radius: Optional[int] = None

    def to_dict(self, assignment: Optional[Mapping] = None) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "identity": self.identity,
            "rank": self.rank,
            "radius": self.radius,
            "cases_checked": self.cases_checked,
            "skipped": self.skipped,
            "passed": self.passed,
            "assumptions": list(self.assumptions),
            "counterexamples": [c.to_dict(assignment) for c in self.counterexamples],
        }
        if self.t_radius is not None:
            out["t_radius"] = self.t_radius
        return out

    def to_json(self, assignment: Optional[Mapping] = None) -> str:
        return json.dumps(self.to_dict(assignment), separators=(",", ":"))

    def summary(self) -> str:
        verdict = "passed" if self.passed else "FAILED"
        extra = f", skipped {self.skipped}" if self.skipped else ""
        return f"{self.identity}: {verdict} ({self.cases_checked} cases{extra})"


def make_report(
    identity: str,
    rank: int,
    radius: int,
    cases_checked: int,
    skipped: int,
    counterexamples: Sequence[Counterexample],
    assumptions: Sequence[str] = (),
    t_radius: Optional[int] = None,
) -> Report:
    ces = sorted(counterexamples, key=Counterexample.sort_key)
    return Report(
        identity=identity,
        rank=rank,
        radius=radius,
        cases_checked=cases_checked,
        skipped=skipped,
        passed=not ces,
        assumptions=list(assumptions),
        counterexamples=ces,
        t_radius=t_radius,
    )
