"""Pydantic request/response models for the control service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class StartSessionRequest(BaseModel):
    config: Optional[dict[str, Any]] = Field(default=None, description="Partial config overlaid onto server defaults")
    scenario: Optional[dict[str, Any]] = Field(default=None, description="Scenario script; defaults to the demo timeline")
    realtime: bool = Field(default=False, description="Pace against the wall clock instead of running virtually")
    duration_ms: Optional[int] = Field(default=None, gt=0, description="Override the scenario duration")
    seed: Optional[int] = Field(default=None, ge=0, description="Override the scenario seed")


class StartSessionResponse(BaseModel):
    session_id: str


class SegmentSummary(BaseModel):
    seq: int
    file_path: str
    byte_len: int
    attested: bool


class SessionSummary(BaseModel):
    session_id: str
    subject_id: str
    started_at: str
    status: str
    duration_ms: int
    segment_count: int
    attested_count: int
    quarantined_count: int
    unanalyzed_count: int
    scenario_seed: int
    segments: list[SegmentSummary]


class SamplesPage(BaseModel):
    samples: list[dict[str, Any]]
    next_cursor: Optional[str] = None


class VerifyResponse(BaseModel):
    kind: str
    seq: Optional[int] = None
    detail: str = ""
    verdict: str


class ProjectionResponse(BaseModel):
    target_gb: float
    mode: str
    days: float
    daily_gb: float


class ConsentRecordModel(BaseModel):
    person_id: str = Field(min_length=1)
    face_signature: str = Field(min_length=1)
    scope_global: bool = False
    granted_to: list[str] = Field(default_factory=list)


class ErrorDetail(BaseModel):
    path: str
    rule: str
    message: str


class StopResponse(BaseModel):
    session_id: str
    status: str
