"""Verification reports: one record per named check."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

TOOL_VERSION = "qma 0.1.0"


@dataclass
class Check:
    name: str
    anchor: str
    degree: int | None
    status: str = "pass"
    tested: int = 0
    counterexample: dict | None = None
    note: str = ""

    def fail(self, input_expr, expected, got) -> None:
        """Record the first failure only; later ones just flip nothing."""
        if self.status != "fail":
            self.status = "fail"
            self.counterexample = {
                "input": str(input_expr),
                "expected": str(expected),
                "got": str(got),
            }

    def require(self, ok: bool, input_expr, expected, got) -> bool:
        self.tested += 1
        if not ok:
            self.fail(input_expr, expected, got)
        return ok

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "paper_anchor": self.anchor,
            "degree_certified": self.degree if self.status == "pass" else None,
            "status": self.status,
            "tested": self.tested,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    title: str
    config: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def check(self, name: str, anchor: str, degree: int | None = None) -> Check:
        c = Check(name, anchor, degree)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for c in other.checks:
            if prefix:
                c.name = f"{prefix}{c.name}"
            self.checks.append(c)
        return self

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> dict:
        return {
            "tool_version": TOOL_VERSION,
            "title": self.title,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def summary(self) -> str:
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            tail = f" ({c.counterexample})" if c.counterexample else ""
            lines.append(f"[{c.status.upper()}] {c.name}{tail}")
        return "\n".join(lines)

    def __bool__(self) -> bool:
        return self.passed
