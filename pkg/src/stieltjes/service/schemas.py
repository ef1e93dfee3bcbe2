"""Pydantic request/response models for the HTTP service and the CLI client.

Numeric payloads travel as decimal strings: the values routinely carry
hundreds of digits, so JSON floats are never used for them.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str


class ValueResponse(BaseModel):
    value: str
    abs_err: str
    usable_digits: int


class ZetaRequest(BaseModel):
    s: str = Field(description="evaluation point, decimal or p/q rational literal")
    digits: int = Field(ge=1, le=100_000)
    method: Literal["em", "eta"] = "em"


class FRegRequest(BaseModel):
    s: str
    digits: int = Field(ge=1, le=100_000)


class RunConfig(BaseModel):
    """Grid and precision parameters for a tabulation run."""

    eps_log2: Optional[int] = Field(default=None, ge=1, description="eps = 2^-eps_log2")
    eps: Optional[str] = Field(
        default=None, description="escape hatch: arbitrary rational eps as p/q"
    )
    digits: int = Field(ge=10)
    node_count: int = Field(ge=2)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _exactly_one_eps(self) -> "RunConfig":
        if (self.eps_log2 is None) == (self.eps is None):
            raise ValueError("specify exactly one of eps_log2 or eps")
        return self


class TabulateRequest(BaseModel):
    config: RunConfig
    out_path: str
    resume: bool = False
    shard_size: int = Field(default=256, ge=1)


class JobAccepted(BaseModel):
    job_id: str


class JobStatus(BaseModel):
    job_id: str
    state: Literal["pending", "running", "done", "failed"]
    done_nodes: int = 0
    total_nodes: int = 0
    error: Optional[str] = None
    error_class: Optional[str] = None
    out_path: Optional[str] = None


class ScanRequest(BaseModel):
    table_path: str
    orders: Optional[list[int]] = None
    factor: float = Field(default=1000.0, gt=1.0)


class ScanResponse(BaseModel):
    clean: bool
    flagged: dict[int, list[tuple[int, int]]]


class AlphasRequest(BaseModel):
    table_path: str
    out_path: str
    skip_scan: bool = False


class AlphasResponse(BaseModel):
    out_path: str
    k0: int
    count: int
    eps: str
    source_digits: int
    exhausted: bool


class GammaRequest(BaseModel):
    alpha_path: str
    n: Optional[int] = Field(default=None, ge=0, description="single index; None = all")
    out_path: Optional[str] = None


class GammaEntry(BaseModel):
    n: int
    value: str
    guaranteed_digits: int


class GammaResponse(BaseModel):
    eps: str
    k0: int
    results: list[GammaEntry]
    out_path: Optional[str] = None


class AkRequest(BaseModel):
    k_max: int = Field(ge=0, le=100_000)
    digits: int = Field(ge=1, le=10_000)
    out_csv: Optional[str] = None


class AkResponse(BaseModel):
    rows: int
    out_csv: Optional[str]
    first_values: list[str]


class IdentitiesRequest(BaseModel):
    k_limit: int = Field(ge=1, le=100_000)
    n_max: int = Field(default=3, ge=0, le=64)
    digits: int = Field(default=50, ge=1, le=10_000)


class IdentitiesResponse(BaseModel):
    k_used: int
    power_residuals: dict[int, str]
    harmonic_residual: str


class CrossZetaRequest(BaseModel):
    s_values: list[str]
    digits: int = Field(ge=1, le=100_000)


class CrossZetaEntry(BaseModel):
    s: str
    agreement_digits: int


class CrossZetaResponse(BaseModel):
    target_digits: int
    worst_agreement: int
    passed: bool
    entries: list[CrossZetaEntry]
