"""Check records and verification reports shared by the spectral module,
the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One verified identity: its residual against the pinned tolerance."""

    name: str
    identity: str
    residual: float
    tolerance: float
    soft: bool = False

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        return "soft-warn" if self.soft else "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "identity": self.identity,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
        }


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, name: str, identity: str, residual: float, tolerance: float,
            soft: bool = False) -> Check:
        check = Check(name, identity, float(residual), float(tolerance), soft)
        self.checks.append(check)
        return check

    def worst(self, name: str, identity: str, residual: float, tolerance: float,
              soft: bool = False) -> Check:
        """Like `add`, but aggregates repeated checks by keeping the largest
        residual seen under the same name."""
        for check in self.checks:
            if check.name == name:
                check.residual = max(check.residual, float(residual))
                return check
        return self.add(name, identity, residual, tolerance, soft)

    def merge(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)
        self.meta.update(other.meta)

    @property
    def hard_failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.hard_failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "soft-warn": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> dict:
        return {
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
            "meta": dict(self.meta),
            "summary": self.counts(),
            "ok": self.ok,
        }

    def table(self) -> str:
        name_w = max([len(c.name) for c in self.checks], default=4)
        lines = [f"{'check'.ljust(name_w)}  {'status':9}  {'residual':>12}  "
                 f"{'tolerance':>12}  identity"]
        lines.append("-" * (name_w + 9 + 12 + 12 + 40))
        for c in self.checks:
            lines.append(
                f"{c.name.ljust(name_w)}  {c.status:9}  {c.residual:12.3e}  "
                f"{c.tolerance:12.3e}  {c.identity}")
        counts = self.counts()
        lines.append("-" * (name_w + 9 + 12 + 12 + 40))
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, "
                     f"{counts['soft-warn']} soft warnings")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)
