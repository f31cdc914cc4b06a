"""
Verification records.

Each cross-check yields a CheckResult (value, reference, tolerance, pass flag).
Checks with severity "info" are reported but never fail a VerifyReport.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    """Result of a single numerical cross-check."""

    name: str
    value: float
    reference: float
    tolerance: float
    passed: bool
    severity: str = "critical"  # "critical" or "info"
    message: str = ""

    @property
    def residual(self) -> float:
        return abs(self.value - self.reference)

    @property
    def informational(self) -> bool:
        return self.severity == "info"


def compare(
    name: str,
    value: float,
    reference: float,
    tolerance: float,
    *,
    relative: bool = False,
    informational: bool = False,
    message: str = "",
) -> CheckResult:
    """|value - reference| <= tolerance (scaled by |reference| when relative)."""
    scale = abs(reference) if relative and reference != 0.0 else 1.0
    passed = math.isfinite(value) and abs(value - reference) <= tolerance * scale
    return CheckResult(
        name=name,
        value=float(value),
        reference=float(reference),
        tolerance=float(tolerance),
        passed=passed,
        severity="info" if informational else "critical",
        message=message,
    )


def at_most(
    name: str, value: float, bound: float, *, informational: bool = False, message: str = ""
) -> CheckResult:
    """value <= bound; reported with reference = bound and tolerance 0."""
    return CheckResult(
        name=name,
        value=float(value),
        reference=float(bound),
        tolerance=0.0,
        passed=math.isfinite(value) and value <= bound,
        severity="info" if informational else "critical",
        message=message,
    )


def at_least(
    name: str, value: float, bound: float, *, informational: bool = False, message: str = ""
) -> CheckResult:
    """value >= bound; reported with reference = bound and tolerance 0."""
    return CheckResult(
        name=name,
        value=float(value),
        reference=float(bound),
        tolerance=0.0,
        passed=math.isfinite(value) and value >= bound,
        severity="info" if informational else "critical",
        message=message,
    )


@dataclass
class VerifyReport:
    """Outcome of one or more verify suites."""

    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.informational]

    @property
    def passed(self) -> bool:
        return not self.failures

    COLUMNS = ("name", "value", "reference", "tolerance", "passed", "informational")

    def to_rows(self) -> list[dict[str, Any]]:
        """One row per check with numeric flags, ready for a CSV table."""
        return [
            {
                "name": c.name,
                "value": c.value,
                "reference": c.reference,
                "tolerance": c.tolerance,
                "passed": int(c.passed),
                "informational": int(c.informational),
            }
            for c in self.checks
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks_passed": sum(1 for c in self.checks if c.passed),
            "checks_total": len(self.checks),
            "failures": [c.name for c in self.failures],
            "informational": [c.name for c in self.checks if c.informational],
        }

    def format_report(self) -> str:
        """Plain-text summary grouped by severity."""
        status = "PASSED" if self.passed else "FAILED"
        lines = [f"Verify suite: {self.suite}", f"Status: {status}", ""]

        critical = [c for c in self.checks if not c.informational]
        info = [c for c in self.checks if c.informational]
        if critical:
            lines.append("Checks:")
            for c in critical:
                icon = "PASS" if c.passed else "FAIL"
                lines.append(f"- [{icon}] {c.name}: {c.value:.6g} vs {c.reference:.6g}")
        if info:
            lines.append("")
            lines.append("Info:")
            for c in info:
                icon = "PASS" if c.passed else "INFO"
                note = f" ({c.message})" if c.message else ""
                lines.append(f"- [{icon}] {c.name}: {c.value:.6g} vs {c.reference:.6g}{note}")
        return "\n".join(lines)
