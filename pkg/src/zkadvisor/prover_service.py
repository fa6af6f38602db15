"""Entity 1: the data-holding institution's HTTP service.

Accepts a private answer profile, returns the proof interchange document,
and records an issuance row. Raw answers are never logged or persisted;
the issuance log holds only the public journal.
"""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .attestation import BackendUnavailable, MockBackend, proof_document
from .questionnaire import (
    PROGRAM_VERSION,
    MalformedInput,
    QuestionnaireSpec,
    default_spec,
    parse_profile,
)


@dataclass
class ProverConfig:
    spec: QuestionnaireSpec = field(default_factory=default_spec)
    backend: MockBackend | None = field(default_factory=MockBackend)
    log_path: Path | None = None


class IssuanceLog:
    """Append-only JSONL log; appends serialized through one lock."""

    def __init__(self, path: Path | None) -> None:
        self._path = path
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        if self._path is None:
            return
        line = json.dumps(record, sort_keys=True) + "\n"
        with self._lock:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(line)


def create_app(config: ProverConfig | None = None) -> FastAPI:
    config = config or ProverConfig()
    app = FastAPI(title="zkadvisor prover (entity 1)")
    log = IssuanceLog(config.log_path)

    @app.get("/v1/health")
    def health() -> dict:
        return {
            "status": "ok",
            "backend_id": config.backend.backend_id if config.backend else "none",
            "program_version": PROGRAM_VERSION,
        }

    @app.get("/v1/spec")
    def spec() -> dict:
        return {
            "version": config.spec.version,
            "questions": [
                {
                    "id": q.id,
                    "text": q.text,
                    "options": list(q.options),
                    "option_points": list(q.option_points),
                }
                for q in config.spec.questions
            ],
        }

    @app.post("/v1/infer")
    async def infer(request: Request) -> JSONResponse:
        raw = await request.body()
        try:
            profile = parse_profile(raw)
        except MalformedInput as exc:
            return JSONResponse(
                status_code=400,
                content={"error": type(exc).__name__, "detail": str(exc)},
            )
        if config.backend is None:
            return JSONResponse(
                status_code=503,
                content={"error": "BackendUnavailable", "detail": "no proof backend configured"},
            )
        started = time.perf_counter()
        try:
            journal, proof = config.backend.prove(profile, config.spec)
        except BackendUnavailable as exc:
            return JSONResponse(
                status_code=503,
                content={"error": "BackendUnavailable", "detail": str(exc)},
            )
        wall_ms = int((time.perf_counter() - started) * 1000)
        log.append(
            {
                "request_id": str(uuid.uuid4()),
                "journal": journal.to_dict(),
                "backend_id": proof.backend_id,
                "wall_time_ms": wall_ms,
            }
        )
        return JSONResponse(status_code=200, content=proof_document(journal, proof))

    return app
