"""Uniform result objects for verification checks.

Every check returns a Report instead of asserting, so callers (tests, the
CLI verifier) decide what a failure means.  JSON serialisation is flat:
{"check": ..., <data fields>, "failures": [...], "passed": ...}.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    check: str
    data: dict
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {"check": self.check}
        out.update(self.data)
        out["failures"] = list(self.failures)
        out["passed"] = self.passed
        return out

    def __str__(self) -> str:
        status = "ok" if self.passed else f"{len(self.failures)} failure(s)"
        return f"{self.check}: {status}"
