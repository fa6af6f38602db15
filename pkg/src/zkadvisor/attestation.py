"""Proof generation and verification binding a public journal to the inference program.

Two backends share one contract: a transparent mock (digest-based, no
cryptographic hiding, fast enough for CI) and a subprocess adapter for an
external zkVM toolchain. The journal is the only public output; answer
data never enters it.
"""
from __future__ import annotations

import hashlib
import hmac
import json
import shutil
import subprocess
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .questionnaire import (
    PROGRAM_VERSION,
    RECORD_SEP,
    AnswerProfile,
    QuestionnaireSpec,
    RiskCategory,
    infer,
    spec_digest,
)

_MOCK_DOMAIN_TAG = b"MOCK1"
_PROGRAM_DOMAIN_TAG = b"zkadvisor-guest"


class BackendUnavailable(RuntimeError):
    """The requested proof backend is not installed or misconfigured."""


class ExternalProverFailure(RuntimeError):
    """External toolchain exited nonzero; diagnostics attached."""

    def __init__(self, message: str, stderr: str = "") -> None:
        super().__init__(message)
        self.stderr = stderr


@dataclass(frozen=True)
class ProgramId:
    digest: bytes
    version: str


def program_id(version: str = PROGRAM_VERSION) -> ProgramId:
    h = hashlib.sha256()
    h.update(_PROGRAM_DOMAIN_TAG)
    h.update(RECORD_SEP)
    h.update(version.encode("utf-8"))
    return ProgramId(digest=h.digest(), version=version)


@dataclass(frozen=True)
class Journal:
    """Public claim bound by the proof. Contains no answer data."""

    category: RiskCategory
    spec_digest: bytes
    program_version: str
    issued_at: int

    def to_dict(self) -> dict:
        return {
            "category": int(self.category),
            "issued_at": self.issued_at,
            "program_version": self.program_version,
            "spec_digest": self.spec_digest.hex(),
        }


@dataclass(frozen=True)
class AttestationProof:
    backend_id: str
    payload: bytes

    def __post_init__(self) -> None:
        if not self.payload:
            raise ValueError("proof payload must be non-empty")


class VerificationOutcome(Enum):
    VALID = "Valid"
    INVALID_PROOF = "InvalidProof"
    PROGRAM_MISMATCH = "ProgramMismatch"
    MALFORMED_JOURNAL = "MalformedJournal"


def encode_journal(journal: Journal) -> bytes:
    """Canonical JSON: sorted keys, no whitespace, integer timestamps."""
    return json.dumps(
        journal.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


def decode_journal(raw: bytes | str) -> Journal:
    try:
        doc = json.loads(raw)
        return journal_from_dict(doc)
    except (json.JSONDecodeError, UnicodeDecodeError, ValueError, TypeError, KeyError) as exc:
        raise MalformedJournalError(str(exc)) from exc


def journal_from_dict(doc: dict) -> Journal:
    if not isinstance(doc, dict) or set(doc) != {
        "category",
        "issued_at",
        "program_version",
        "spec_digest",
    }:
        raise MalformedJournalError("unexpected journal keys")
    digest = bytes.fromhex(doc["spec_digest"])
    if len(digest) != 32:
        raise MalformedJournalError("spec_digest must be 32 bytes")
    return Journal(
        category=RiskCategory(int(doc["category"])),
        spec_digest=digest,
        program_version=str(doc["program_version"]),
        issued_at=int(doc["issued_at"]),
    )


class MalformedJournalError(ValueError):
    pass


def _mock_payload(program_digest: bytes, journal_bytes: bytes) -> bytes:
    h = hashlib.sha256()
    h.update(_MOCK_DOMAIN_TAG)
    h.update(RECORD_SEP)
    h.update(program_digest)
    h.update(RECORD_SEP)
    h.update(journal_bytes)
    return h.digest()


class MockBackend:
    """Transparent stand-in for a zkVM: exercises plumbing and tamper
    detection, not cryptographic soundness (anyone can forge)."""

    backend_id = "mock"

    def __init__(self, version: str = PROGRAM_VERSION) -> None:
        self._program_id = program_id(version)

    @property
    def program(self) -> ProgramId:
        return self._program_id

    def prove(
        self,
        profile: AnswerProfile,
        spec: QuestionnaireSpec,
        issued_at: int | None = None,
    ) -> tuple[Journal, AttestationProof]:
        result = infer(profile, spec)
        journal = Journal(
            category=result.category,
            spec_digest=result.spec_digest,
            program_version=self._program_id.version,
            issued_at=int(time.time()) if issued_at is None else issued_at,
        )
        payload = _mock_payload(self._program_id.digest, encode_journal(journal))
        return journal, AttestationProof(backend_id=self.backend_id, payload=payload)

    def verify(
        self, journal: Journal, proof: AttestationProof, pinned: ProgramId
    ) -> VerificationOutcome:
        return self.verify_bytes(encode_journal(journal), proof, pinned)

    def verify_bytes(
        self, journal_bytes: bytes, proof: AttestationProof, pinned: ProgramId
    ) -> VerificationOutcome:
        try:
            journal = decode_journal(journal_bytes)
        except MalformedJournalError:
            return VerificationOutcome.MALFORMED_JOURNAL
        if journal.program_version != pinned.version:
            return VerificationOutcome.PROGRAM_MISMATCH
        expected = _mock_payload(pinned.digest, journal_bytes)
        if not hmac.compare_digest(expected, proof.payload):
            return VerificationOutcome.INVALID_PROOF
        return VerificationOutcome.VALID


@dataclass(frozen=True)
class ExternalBackendConfig:
    prove_cmd: str
    verify_cmd: str
    program_image: str
    proof_out: str = "proof.bin"

    @classmethod
    def from_file(cls, path: str) -> "ExternalBackendConfig":
        with open(path, "rb") as fh:
            doc = json.load(fh)
        return cls(
            prove_cmd=doc["prove_cmd"],
            verify_cmd=doc["verify_cmd"],
            program_image=doc["program_image"],
            proof_out=doc.get("proof_out", "proof.bin"),
        )


class ExternalBackend:
    """Subprocess adapter for an installed zkVM toolchain.

    prove_cmd receives the program image and the private input path as its
    last argument, writes journal JSON to stdout and proof bytes to
    `proof_out`. verify_cmd receives journal and proof file paths; exit 0
    means the proof verified.
    """

    backend_id = "external-zkvm"

    def __init__(self, config: ExternalBackendConfig, workdir: str | None = None) -> None:
        self.config = config
        self.workdir = Path(workdir) if workdir else Path.cwd()
        if shutil.which(config.prove_cmd) is None:
            raise BackendUnavailable(f"prover command not found: {config.prove_cmd}")
        if shutil.which(config.verify_cmd) is None:
            raise BackendUnavailable(f"verifier command not found: {config.verify_cmd}")
        self.last_prove_seconds: float | None = None
        self.last_verify_seconds: float | None = None

    def prove_file(self, input_path: str) -> tuple[Journal, AttestationProof]:
        proof_path = self.workdir / self.config.proof_out
        started = time.perf_counter()
        result = subprocess.run(
            [self.config.prove_cmd, self.config.program_image, input_path],
            capture_output=True,
            text=True,
            cwd=self.workdir,
        )
        self.last_prove_seconds = time.perf_counter() - started
        if result.returncode != 0:
            raise ExternalProverFailure(
                f"prover exited {result.returncode}", stderr=result.stderr
            )
        journal = decode_journal(result.stdout.strip())
        payload = proof_path.read_bytes()
        return journal, AttestationProof(backend_id=self.backend_id, payload=payload)

    def verify(
        self, journal: Journal, proof: AttestationProof, pinned: ProgramId
    ) -> VerificationOutcome:
        if journal.program_version != pinned.version:
            return VerificationOutcome.PROGRAM_MISMATCH
        journal_path = self.workdir / "journal.json"
        proof_path = self.workdir / "proof.verify.bin"
        journal_path.write_bytes(encode_journal(journal))
        proof_path.write_bytes(proof.payload)
        started = time.perf_counter()
        result = subprocess.run(
            [self.config.verify_cmd, str(journal_path), str(proof_path)],
            capture_output=True,
            cwd=self.workdir,
        )
        self.last_verify_seconds = time.perf_counter() - started
        if result.returncode != 0:
            return VerificationOutcome.INVALID_PROOF
        return VerificationOutcome.VALID


def proof_document(journal: Journal, proof: AttestationProof) -> dict:
    """Proof interchange document shared between the two services."""
    return {
        "journal": journal.to_dict(),
        "proof": {"backend_id": proof.backend_id, "payload_hex": proof.payload.hex()},
    }


def parse_proof_document(doc: dict) -> tuple[Journal, AttestationProof]:
    journal = journal_from_dict(doc["journal"])
    proof = AttestationProof(
        backend_id=str(doc["proof"]["backend_id"]),
        payload=bytes.fromhex(doc["proof"]["payload_hex"]),
    )
    return journal, proof


def make_backend(name: str, config_path: str | None = None):
    if name == "mock":
        return MockBackend()
    if name == "external-zkvm":
        if not config_path:
            raise BackendUnavailable("external backend requires a config file")
        return ExternalBackend(ExternalBackendConfig.from_file(config_path))
    raise BackendUnavailable(f"unknown backend: {name}")
