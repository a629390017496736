"""
Report schemas

Validation reports for monomial actions and check reports for the
verification suites. Failures always carry a witness.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ViolationKind(str, Enum):
    """Kinds of action validation failures"""
    LOOP = "loop"
    VERTEX_PERMUTATION = "vertex_permutation"
    ARROW_MAP = "arrow_map"
    ENDPOINT_MISMATCH = "endpoint_mismatch"
    RELATION = "relation"
    COMMUTATION = "commutation"
    ADMISSIBILITY = "admissibility"
    NOT_DIAGONAL = "not_diagonal"


class Violation(BaseModel):
    kind: ViolationKind
    message: str
    witness: Dict[str, Any] = Field(default_factory=dict)


class ValidationReport(BaseModel):
    """Outcome of validate_action"""
    valid: bool
    admissible: bool
    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.valid and self.admissible and not self.violations


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class CheckRecord(BaseModel):
    """One machine check with its outcome"""
    model_config = ConfigDict(use_enum_values=False)

    name: str
    status: CheckStatus
    detail: str = ""
    witness: Optional[Any] = None

    @classmethod
    def of(cls, name: str, passed: bool, detail: str = "", witness: Any = None) -> "CheckRecord":
        return cls(
            name=name,
            status=CheckStatus.PASS if passed else CheckStatus.FAIL,
            detail=detail,
            witness=None if passed else witness,
        )


class Report(BaseModel):
    """Result of a verification suite or CLI command"""
    command: str
    fixture: str
    app_version: str = ""
    seed: Optional[int] = None
    checks: List[CheckRecord] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)
    timing: Optional[float] = None

    @property
    def passed(self) -> bool:
        """No check failed (inconclusive checks are not failures)"""
        return all(c.status != CheckStatus.FAIL for c in self.checks)

    def check(self, name: str) -> CheckRecord:
        for record in self.checks:
            if record.name == name:
                return record
        raise KeyError(name)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for record in other.checks:
            self.checks.append(record.model_copy(update={"name": f"{prefix}{record.name}"}))
        for key, value in other.data.items():
            self.data[f"{prefix}{key}"] = value
