from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

GROUP_PATTERN = r"^(sl2z|gamma0:[1-9]\d*)$"


class RunConfig(BaseModel):
    """Resolved knobs of one CLI run; echoed in every output header."""

    command: Literal["expand", "poincare", "qform", "inner", "verify"]
    group: str = Field("sl2z", pattern=GROUP_PATTERN)
    weight: Optional[int] = None
    form: str = "delta"
    kind: Optional[Literal["par", "hyp", "ell"]] = None
    order: int = Field(1, ge=1, le=2)
    m: int = 1
    m_max: int = Field(8, ge=0)
    m_window: Optional[int] = Field(None, ge=0)
    point: Optional[str] = None
    cusp: Literal["oo", "0"] = "oo"
    points: List[str] = Field(default_factory=list)
    disc: Optional[int] = None
    matrix: Optional[str] = None
    lattice_bound: Optional[int] = Field(None, gt=0)
    coset_bound: Optional[int] = Field(None, gt=0)
    q_order: Optional[int] = Field(None, gt=0)
    quad_order: Optional[int] = Field(None, gt=0)
    y_cap: Optional[float] = Field(None, gt=0)
    y_sample: Optional[float] = Field(None, gt=0)
    radius: Optional[float] = Field(None, gt=0, lt=1)
    suite: str = "all"
    only: List[str] = Field(default_factory=list)
    hom: Literal["plus", "minus"] = "plus"
    zero_hom: bool = False
    output_format: Literal["json", "csv"] = "json"
    out: Optional[str] = None

    @field_validator("weight")
    @classmethod
    def validate_weight(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and (v < 2 or v % 2):
            raise ValueError(f"weight must be an even integer >= 2, got {v}")
        return v

    @field_validator("group", mode="before")
    @classmethod
    def normalize_group(cls, v: str) -> str:
        text = str(v).strip().lower()
        return "sl2z" if text == "gamma0:1" else text

    @model_validator(mode="after")
    def check_command_arguments(self) -> "RunConfig":
        if self.command in ("expand", "poincare", "inner") and self.kind is None:
            raise ValueError(f"'{self.command}' needs a kind: par, hyp or ell")
        if self.command == "poincare" and self.weight is not None and self.weight < 4:
            raise ValueError("Poincare series need weight >= 4")
        if self.command == "qform" and self.disc is None and self.matrix is None:
            raise ValueError("'qform' needs --disc or --matrix")
        return self
