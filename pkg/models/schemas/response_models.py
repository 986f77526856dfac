from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CoefficientRow(BaseModel):
    tag: str
    index: int
    re: float
    im: float


class SeriesRow(BaseModel):
    point: str
    re: float
    im: float
    last_shell: float


class ValueRow(BaseModel):
    """A named scalar result, e.g. a class number, a period or an inner product."""

    quantity: str
    re: float
    im: float = 0.0
    detail: Optional[str] = None


class CheckResult(BaseModel):
    """One named verification check; ``passed`` iff residual <= tolerance."""

    name: str
    suite: str
    residual: float
    tolerance: float
    passed: bool
    duration: float = 0.0
    detail: Optional[str] = None


class VerifyReport(BaseModel):
    suite: str
    checks: List[CheckResult] = Field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class TableResponse(BaseModel):
    """Document emitted by every command: {meta: {...}, rows: [...]}."""

    meta: Dict[str, Any]
    rows: List[Dict[str, Any]]
