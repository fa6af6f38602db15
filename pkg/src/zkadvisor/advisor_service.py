"""Entity 2: verifies attestations and serves advice.

Verification runs before any prompting. Verified-claim material (d1) is
rendered into contexts only when the proof checks out against the pinned
program id; anything else degrades to d0-only advice, with the outcome
reported so the client can display trust status.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .attestation import (
    AttestationProof,
    MockBackend,
    ProgramId,
    VerificationOutcome,
    program_id,
)
from .llm import ProviderRejected, ProviderTimeout, ProviderUnavailable, StubChatClient
from .questionnaire import RiskCategory
from .prompting import (
    ProposalParseFailure,
    TraitPartition,
    build_context_set,
    default_conditions,
    explain,
    option_presets,
    propose,
    validate_option_set,
    ScoredOption,
)

NO_CLAIM = "NoClaim"


@dataclass
class AdvisorConfig:
    pinned: ProgramId = field(default_factory=program_id)
    llm: object = field(default_factory=StubChatClient)
    verifier: MockBackend = field(default_factory=MockBackend)
    template_dir: str | None = None
    default_preset: str = "investment-default"


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": "MalformedRequest", "detail": detail})


def _canonical_bytes(journal_doc: dict) -> bytes:
    return json.dumps(journal_doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _verify_claim(
    config: AdvisorConfig, journal_doc: dict, proof_doc: dict
) -> VerificationOutcome:
    try:
        proof = AttestationProof(
            backend_id=str(proof_doc["backend_id"]),
            payload=bytes.fromhex(proof_doc["payload_hex"]),
        )
    except (KeyError, TypeError, ValueError):
        return VerificationOutcome.INVALID_PROOF
    return config.verifier.verify_bytes(_canonical_bytes(journal_doc), proof, config.pinned)


def create_app(config: AdvisorConfig | None = None) -> FastAPI:
    config = config or AdvisorConfig()
    app = FastAPI(title="zkadvisor advisor (entity 2)")
    conditions = default_conditions()

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "pinned_program_version": config.pinned.version}

    @app.post("/v1/verify")
    async def verify(request: Request) -> JSONResponse:
        try:
            doc = json.loads(await request.body())
            journal_doc = doc["journal"]
            proof_doc = doc["proof"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            return _bad_request(f"expected journal and proof: {exc}")
        outcome = _verify_claim(config, journal_doc, proof_doc)
        return JSONResponse(status_code=200, content={"outcome": outcome.value})

    @app.post("/v1/advise")
    async def advise(request: Request) -> JSONResponse:
        try:
            doc = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _bad_request(f"not valid JSON: {exc}")
        if not isinstance(doc, dict):
            return _bad_request("top level must be a JSON object")
        query = doc.get("query")
        if not query or not isinstance(query, str):
            return _bad_request("'query' must be a non-empty string")
        d0_text = doc.get("d0_text", "")
        condition_name = doc.get("condition", "Cond0")
        if condition_name not in conditions:
            return _bad_request(f"unknown condition: {condition_name}")
        condition = conditions[condition_name]

        if "options" in doc:
            try:
                options = validate_option_set(
                    [ScoredOption(text=o["text"], score=int(o["score"])) for o in doc["options"]]
                )
            except (ValueError, KeyError, TypeError) as exc:
                return _bad_request(f"bad option set: {exc}")
        else:
            preset = doc.get("preset", config.default_preset)
            presets = option_presets()
            if preset not in presets:
                return _bad_request(f"unknown option preset: {preset}")
            options = presets[preset]

        journal_doc = doc.get("journal")
        proof_doc = doc.get("proof")
        if journal_doc is not None and proof_doc is None:
            return _bad_request("journal supplied without proof")

        d1_claims: tuple[str, ...] = ()
        if journal_doc is None:
            verification = NO_CLAIM
        else:
            outcome = _verify_claim(config, journal_doc, proof_doc)
            verification = outcome.value
            if outcome is VerificationOutcome.VALID:
                category = RiskCategory(int(journal_doc["category"]))
                d1_claims = (
                    f"Risk tolerance category: {category.label} "
                    f"(attested by program version {journal_doc['program_version']})",
                )

        partition = TraitPartition(d0_text=d0_text, d1_claims=d1_claims)
        contexts = build_context_set(partition, config.template_dir)
        seed = doc.get("seed")
        try:
            proposal = propose(
                config.llm, query, contexts[condition.c_prop], options,
                config.template_dir, seed=seed,
            )
            explanation = explain(
                config.llm, query, proposal, contexts[condition.c_exp],
                config.template_dir, seed=seed,
            )
        except ProposalParseFailure as exc:
            return JSONResponse(
                status_code=422,
                content={"error": "ProposalParseFailure", "raw_outputs": exc.raw_outputs},
            )
        except (ProviderUnavailable, ProviderTimeout, ProviderRejected) as exc:
            return JSONResponse(
                status_code=502,
                content={"error": type(exc).__name__, "detail": str(exc)},
            )

        return JSONResponse(
            status_code=200,
            content={
                "proposal": {
                    "text": proposal.selected.text,
                    "score": proposal.selected.score,
                    "retries_used": proposal.retries_used,
                },
                "explanation": {"text": explanation.text},
                "verification": verification,
                "contexts_used": [condition.c_prop, condition.c_exp],
            },
        )

    return app
