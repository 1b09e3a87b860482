from pydantic import BaseModel, Field, model_validator
from typing import Literal, Optional

Command = Literal["verify", "verify-file", "series", "errata", "consistency", "routes", "integral", "list"]

class RunConfig(BaseModel):
    command: Command
    ids: list[str] = Field(default_factory=list)
    path: Optional[str] = None
    form: Optional[Literal["printed", "corrected"]] = None
    n_lo: int = 0
    n_hi: int = 0
    series: Optional[str] = None
    order: int = Field(default=16, ge=1)
    report: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    jobs: int = Field(default=1, ge=1)
    keep_going: bool = False
    steps: int = Field(default=200_000, ge=16)
    cutoff: float = Field(default=1000.0, gt=0)

    @model_validator(mode="after")
    def check_range(self):
        if self.n_lo < 0:
            raise ValueError(f"range must start at n >= 0, got {self.n_lo}")
        if self.n_lo > self.n_hi:
            raise ValueError(f"empty range {self.n_lo}..{self.n_hi}")
        if self.command == "verify" and not self.ids:
            raise ValueError("no identity ids given")
        return self
