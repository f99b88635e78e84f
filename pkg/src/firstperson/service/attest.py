"""Standalone attestation service: the nonce holder behind the hash chain.

Same logic as the in-process service object; this app only adds the HTTP
surface. Hex fields are 64 lowercase hex chars throughout.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ..integrity import AttestationError, AttestationService

_HEX64 = r"^[0-9a-f]{64}$"


class AttestRequest(BaseModel):
    session_id: str = Field(min_length=1)
    seq: int = Field(ge=0)
    h_hex: str = Field(pattern=_HEX64)


class AttestResponse(BaseModel):
    a_hex: str


class VerifyRequest(BaseModel):
    session_id: str = Field(min_length=1)
    seq: int = Field(ge=0)
    h_hex: str = Field(pattern=_HEX64)
    next_prev_attestation_hex: str = Field(pattern=_HEX64)


class VerifyResponse(BaseModel):
    ok: bool


class AttestationRecordModel(BaseModel):
    seq: int
    h_hex: str
    a_hex: str


class AttestationsResponse(BaseModel):
    records: list[AttestationRecordModel]


def create_attestation_app(store_dir: str | Path) -> FastAPI:
    service = AttestationService(store_dir)
    app = FastAPI(title="attestation service", version="0.1.0")
    app.state.service = service

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    @app.post("/attest", response_model=AttestResponse)
    def attest(request: AttestRequest) -> AttestResponse:
        try:
            a = service.attest(request.session_id, request.seq, bytes.fromhex(request.h_hex))
        except AttestationError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return AttestResponse(a_hex=a.hex())

    @app.post("/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        ok = service.verify_one(
            request.session_id, request.seq, request.h_hex, request.next_prev_attestation_hex
        )
        return VerifyResponse(ok=ok)

    @app.get("/sessions/{session_id}/attestations", response_model=AttestationsResponse)
    def attestations(session_id: str) -> AttestationsResponse:
        records = service.records(session_id)
        return AttestationsResponse(
            records=[
                AttestationRecordModel(seq=r.seq, h_hex=r.h_hex, a_hex=r.a_hex)
                for _, r in sorted(records.items())
            ]
        )

    return app
