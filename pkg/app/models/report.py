"""Verification report models"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    """Outcome of a single check"""
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
    DIAGNOSTIC = "diagnostic"  # recorded, never fails the run


class CheckResult(BaseModel):
    """One identity, bound or membership check"""
    name: str = Field(..., description="Check identifier")
    status: CheckStatus = Field(..., description="Outcome")
    exact: bool = Field(True, description="Exact certificate (False: sampled within tolerance)")
    checked: int = Field(0, description="Number of tuples or instances examined")
    witness: Optional[Any] = Field(None, description="First counterexample, if any")
    detail: Optional[str] = Field(None, description="Human-readable note")

    @property
    def ok(self) -> bool:
        return self.status != CheckStatus.FAILED

    @classmethod
    def passed(cls, name: str, checked: int = 0, exact: bool = True, detail: Optional[str] = None) -> "CheckResult":
        return cls(name=name, status=CheckStatus.PASSED, exact=exact, checked=checked, detail=detail)

    @classmethod
    def failed(cls, name: str, witness: Any, checked: int = 0, exact: bool = True, detail: Optional[str] = None) -> "CheckResult":
        return cls(name=name, status=CheckStatus.FAILED, exact=exact, checked=checked, witness=witness, detail=detail)


class Report(BaseModel):
    """Machine-readable output of a CLI command or API call"""
    command: str = Field(..., description="Command that produced the report")
    config: Dict[str, Any] = Field(default_factory=dict, description="Resolved job configuration")
    checks: List[CheckResult] = Field(default_factory=list, description="Checks in execution order")
    result: Dict[str, Any] = Field(default_factory=dict, description="Command-specific payload")

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def summary(self) -> str:
        """Human-readable summary, one line per check"""
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for check in self.checks:
            kind = "exact" if check.exact else "sampled"
            line = f"  [{check.status.value}] {check.name} ({kind}, {check.checked} checked)"
            if check.witness is not None and check.status == CheckStatus.FAILED:
                line += f" witness={check.witness}"
            lines.append(line)
        return "\n".join(lines)
