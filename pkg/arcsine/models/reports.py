from pydantic import BaseModel, model_validator
from typing import Optional
from enum import Enum

class VerifyStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"

class FailureRecord(BaseModel):
    n: int
    lhs: str
    rhs: str
    # set when evaluation itself failed at this n
    error: Optional[str] = None

# one identity (and form) swept over an n range
class VerifyReport(BaseModel):
    identity: str
    form: Optional[str] = None
    n_lo: int
    n_hi: int
    status: VerifyStatus = VerifyStatus.PASS
    first_failure: Optional[FailureRecord] = None
    checked: int = 0
    fail_count: int = 0
    elapsed_ms: float = 0.0

    @model_validator(mode="after")
    def refine_status(self):
        self.status = VerifyStatus.FAIL if self.first_failure is not None else VerifyStatus.PASS
        return self

    @property
    def label(self) -> str:
        return self.identity if self.form is None else f"{self.identity}[{self.form}]"

    @property
    def passed(self) -> bool:
        return self.status == VerifyStatus.PASS

class QuadratureReport(BaseModel):
    n: int
    steps: int
    cutoff: float
    head: float
    tail_estimate: float
    tail_bound: float
    estimate: float
    exact: int
    relative_error: float
