"""Structured check reports with byte-deterministic JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
INFO = "info"

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    label: str
    status: str
    witness: Any = None
    normative: bool = True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "label": self.label,
            "status": self.status,
            "normative": self.normative,
            "witness": self.witness,
        }


@dataclass
class Report:
    suite: str
    params: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, label: str, status, witness=None, normative: bool = True) -> Check:
        if isinstance(status, bool):
            status = PASS if status else FAIL
        c = Check(name, label, status, witness, normative)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0, INFO: 0}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        counts["total"] = len(self.checks)
        return counts

    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL and c.normative]

    def inconclusive(self) -> list[Check]:
        return [c for c in self.checks if c.status == INCONCLUSIVE and c.normative]

    def ok(self, strict: bool = False) -> bool:
        return not self.failed() and not (strict and self.inconclusive())

    def status_of(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary(),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    def text(self) -> str:
        lines = [f"== {self.suite} {json.dumps(self.params, sort_keys=True)}"]
        for c in self.checks:
            tag = c.status.upper() if c.normative else f"{c.status.upper()} (informational)"
            lines.append(f"[{tag:>12}] {c.label}: {c.name}")
        s = self.summary()
        lines.append(
            f"-- {s['pass']} passed, {s['fail']} failed, {s['inconclusive']} inconclusive, {s['info']} informational"
        )
        return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def merge(suite: str, params: dict, reports: list[Report]) -> dict:
    """Aggregate JSON for several suites run together."""
    total = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0, INFO: 0, "total": 0}
    for r in reports:
        for k, v in r.summary().items():
            total[k] = total.get(k, 0) + v
    return {
        "schema": SCHEMA_VERSION,
        "suite": suite,
        "params": params,
        "reports": [r.to_json() for r in reports],
        "summary": total,
    }
