"""Uniform pass/fail reporting for the verification harnesses.

Every harness returns a ``CheckReport``: a list of named checks, each
with the number of instances verified and the first counterexample if
one was found, plus a ``scope`` record of what was quantified over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


@dataclass
class Check:
    """One named verification with an optional first counterexample."""

    name: str
    passed: bool = True
    count: int = 0
    witness: dict | None = None

    def record(self, ok: bool, witness_fn: Callable[[], dict] | None = None) -> bool:
        """Count one instance; keep the first failing witness."""
        self.count += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = witness_fn() if witness_fn is not None else {}
        return ok

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed, "count": self.count}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class CheckReport:
    """A bundle of named checks plus the scope they quantified over."""

    checks: list[Check] = field(default_factory=list)
    scope: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str) -> Check:
        check = Check(name)
        self.checks.append(check)
        return check

    def first_failure(self) -> Check | None:
        for check in self.checks:
            if not check.passed:
                return check
        return None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "scope": self.scope,
            "checks": [c.to_json() for c in self.checks],
        }
