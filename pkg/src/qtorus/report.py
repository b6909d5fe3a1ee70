"""Line-oriented verification reports (``OK <case>`` / ``FAIL <case>: lhs=.. rhs=..``)."""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    case: str
    ok: bool
    lhs: str = ""
    rhs: str = ""

    def line(self) -> str:
        if self.ok:
            return f"OK {self.case}"
        return f"FAIL {self.case}: lhs={self.lhs} rhs={self.rhs}"


@dataclass
class Report:
    title: str = ""
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def check(self, case: str, lhs, rhs) -> bool:
        ok = lhs == rhs
        self.checks.append(Check(case, ok, "" if ok else str(lhs), "" if ok else str(rhs)))
        return ok

    def record(self, case: str, ok: bool, lhs="", rhs="") -> None:
        self.checks.append(Check(case, ok, str(lhs), str(rhs)))

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    @property
    def checked(self) -> int:
        return len(self.checks)

    @property
    def failed(self) -> int:
        return sum(not c.ok for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def lines(self, only_failures: bool = False) -> list[str]:
        checks = self.failures() if only_failures else self.checks
        return sorted(c.line() for c in checks)

    def summary(self) -> dict:
        return {"checked": self.checked, "failed": self.failed}

    def render(self, only_failures: bool = False, color: bool | None = None) -> str:
        if color is None:
            color = use_color()
        out = []
        for line in self.lines(only_failures):
            if color:
                tint = "32" if line.startswith("OK") else "31"
                line = f"\x1b[{tint}m{line}\x1b[0m"
            out.append(line)
        out.extend(f"NOTE {n}" for n in sorted(self.notes))
        out.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(out)


def use_color() -> bool:
    return os.environ.get("QTORUS_COLOR", "1") != "0" and sys.stdout.isatty()
