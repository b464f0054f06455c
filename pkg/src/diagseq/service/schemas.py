"""Request and response bodies for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class ErrorBody(BaseModel):
    error: str
    detail: str


class ComponentOut(BaseModel):
    id: str
    name: str
    cost: float
    prob: float


class SequencedTestOut(BaseModel):
    component: str
    name: str
    cost: float
    prob: float
    cp_ratio: float | None  # null when prob == 0 (ratio is infinite)
    rank: int


class RecommendationOut(BaseModel):
    component: str
    name: str
    cost: float
    prob: float
    cp_ratio: float | None


class HistoryEntryOut(BaseModel):
    component: str
    outcome: Literal["pass", "fail"]
    at: str  # ISO 8601, UTC


class SessionResponse(BaseModel):
    id: str
    symptom: str
    status: Literal["active", "diagnosed", "exhausted"]
    recommendation: RecommendationOut | None
    remaining: list[ComponentOut]
    remaining_expected_cost: float
    history: list[HistoryEntryOut]
    diagnosis: str | None
    created_at: str
    updated_at: str


class CreateSessionRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    symptom: str


class OutcomeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    component: str
    outcome: Literal["pass", "fail"]
    override: bool = False


class WhatifOverride(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cost: float | None = None
    prob: float | None = None


class WhatifRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    symptom: str
    overrides: dict[str, WhatifOverride] = Field(default_factory=dict)


class WhatifResponse(BaseModel):
    symptom: str
    expected_cost: float
    nominal_expected_cost: float
    delta_vs_nominal: float
    sequence: list[SequencedTestOut]
    nominal_sequence: list[SequencedTestOut]


class SensitivityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    symptom: str
    expert: str
    s: float = Field(ge=1.0)
    n_samples: int = Field(default=10000, ge=1, le=1_000_000)
    seed: int
    band_mass: float = Field(default=0.70, gt=0.0, lt=1.0)
    renormalize_samples: bool = True
    include_cdf: bool = True


class SensitivityResponse(BaseModel):
    symptom: str
    expert: str
    s: float
    n_samples: int
    seed: int
    band_mass: float
    renormalize_samples: bool
    nominal_diff: float
    mean_diff: float
    quantiles: dict[str, float]  # level (as printed, e.g. "0.15") -> diff value
    prob_positive: float
    cdf_points: list[tuple[float, float]]
