"""Attestation timing benchmark: per-profile prove/verify wall-clock rows
and a summary table with Proof Generation Time / Verification Time rows."""
from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass
from pathlib import Path

from ..attestation import MockBackend, VerificationOutcome, encode_journal
from ..questionnaire import AnswerProfile, QuestionnaireSpec, default_spec


@dataclass(frozen=True)
class TimingRecord:
    backend_id: str
    hardware: str
    profile_id: str
    proof_gen_s: float
    verify_s: float

    def __post_init__(self) -> None:
        if self.proof_gen_s < 0 or self.verify_s < 0:
            raise ValueError("timings must be non-negative")


def hardware_label() -> str:
    return f"{os.cpu_count() or 1} vCPUs (local)"


def bench_attestation(
    backend: MockBackend,
    profiles: list[AnswerProfile],
    spec: QuestionnaireSpec | None = None,
    repetitions: int = 1,
    hardware: str | None = None,
) -> list[TimingRecord]:
    spec = spec or default_spec()
    hardware = hardware or hardware_label()
    records = []
    for profile in profiles:
        profile_id = "".join(str(a) for a in profile.answers)
        prove_total = 0.0
        verify_total = 0.0
        for _ in range(repetitions):
            started = time.perf_counter()
            journal, proof = backend.prove(profile, spec)
            prove_total += time.perf_counter() - started
            journal_bytes = encode_journal(journal)
            started = time.perf_counter()
            outcome = backend.verify_bytes(journal_bytes, proof, backend.program)
            verify_total += time.perf_counter() - started
            if outcome is not VerificationOutcome.VALID:
                raise RuntimeError(f"benchmark proof failed verification: {outcome}")
        records.append(
            TimingRecord(
                backend_id=backend.backend_id,
                hardware=hardware,
                profile_id=profile_id,
                proof_gen_s=prove_total / repetitions,
                verify_s=verify_total / repetitions,
            )
        )
    return records


def write_bench_report(
    records: list[TimingRecord],
    outdir: str | Path,
    unavailable: list[str] | None = None,
) -> dict[str, Path]:
    """CSV of raw rows plus a summary of mean timings per configuration;
    backends that are not installed appear as N/A columns."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    csv_path = outdir / "timings.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["backend", "hardware", "profile_id", "proof_gen_s", "verify_s"])
        for r in records:
            writer.writerow(
                [r.backend_id, r.hardware, r.profile_id, f"{r.proof_gen_s:.6f}", f"{r.verify_s:.6f}"]
            )

    configs = sorted({(r.backend_id, r.hardware) for r in records})
    backends = sorted({r.backend_id for r in records}) + sorted(unavailable or [])
    lines = [
        "# Benchmark results",
        "",
        "| Configuration | Metric | " + " | ".join(backends) + " |",
        "|" + "---|" * (len(backends) + 2),
    ]
    hardwares = sorted({hw for _, hw in configs})
    for hw in hardwares:
        for metric, attr in [("Proof Generation Time", "proof_gen_s"), ("Verification Time", "verify_s")]:
            cells = []
            for backend in backends:
                rows = [r for r in records if r.backend_id == backend and r.hardware == hw]
                if not rows:
                    cells.append("N/A")
                else:
                    cells.append(f"{sum(getattr(r, attr) for r in rows) / len(rows):.6f} s")
            lines.append(f"| {hw} | {metric} | " + " | ".join(cells) + " |")

    md_path = outdir / "summary.md"
    md_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return {"csv": csv_path, "md": md_path}
