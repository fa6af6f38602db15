"""Command-line entry point. Thin adapters only: every subcommand parses
flags, calls into the library and prints JSON on stdout (human summaries
go to stderr)."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from . import attestation, questionnaire
from .attestation import (
    MockBackend,
    VerificationOutcome,
    make_backend,
    parse_proof_document,
    proof_document,
    program_id,
)
from .questionnaire import AnswerProfile, default_spec, parse_profile


def _emit(doc) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def _fail(exc: Exception) -> None:
    click.echo(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), err=True)
    sys.exit(1)


def _load_spec(path: str | None):
    return questionnaire.QuestionnaireSpec.from_file(path) if path else default_spec()


@click.group()
def main() -> None:
    """Attested risk-trait inference and privacy-preserving advice."""


@main.command()
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--spec", "spec_path", type=click.Path(exists=True))
def infer(input_path: str, spec_path: str | None) -> None:
    """Run the trait inference locally (no proof)."""
    try:
        profile = parse_profile(Path(input_path).read_bytes())
        result = questionnaire.infer(profile, _load_spec(spec_path))
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    _emit(
        {
            "category": result.category.name,
            "category_label": result.category.label,
            "total_score": result.total_score,
            "spec_digest": result.spec_digest.hex(),
            "program_version": result.program_version,
        }
    )


@main.command()
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--backend", default="mock", type=click.Choice(["mock", "external-zkvm"]))
@click.option("--backend-config", type=click.Path(exists=True))
@click.option("--spec", "spec_path", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path())
def prove(input_path, backend, backend_config, spec_path, out_path) -> None:
    """Produce a (journal, proof) interchange document."""
    try:
        b = make_backend(backend, backend_config)
        if backend == "external-zkvm":
            journal, proof = b.prove_file(input_path)
        else:
            profile = parse_profile(Path(input_path).read_bytes())
            journal, proof = b.prove(profile, _load_spec(spec_path))
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    doc = proof_document(journal, proof)
    if out_path:
        Path(out_path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        click.echo(f"wrote {out_path}", err=True)
    _emit(doc)


@main.command()
@click.option("--proof", "proof_path", required=True, type=click.Path(exists=True))
@click.option("--program-version", default=questionnaire.PROGRAM_VERSION)
def verify(proof_path: str, program_version: str) -> None:
    """Verify a proof interchange document against a pinned program."""
    try:
        doc = json.loads(Path(proof_path).read_text())
        journal, proof = parse_proof_document(doc)
        outcome = MockBackend().verify(journal, proof, program_id(program_version))
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    _emit({"outcome": outcome.value})
    if outcome is not VerificationOutcome.VALID:
        sys.exit(1)


@main.command()
@click.option("--url", default="http://127.0.0.1:8002")
@click.option("--query", required=True)
@click.option("--d0", "d0_text", default="")
@click.option("--proof", "proof_path", type=click.Path(exists=True))
@click.option("--condition", default="Cond0")
@click.option("--preset", default="investment-default")
def advise(url, query, d0_text, proof_path, condition, preset) -> None:
    """Ask a running advisor service for advice."""
    body = {"query": query, "d0_text": d0_text, "condition": condition, "preset": preset}
    if proof_path:
        doc = json.loads(Path(proof_path).read_text())
        body["journal"] = doc["journal"]
        body["proof"] = doc["proof"]
    try:
        resp = httpx.post(url.rstrip("/") + "/v1/advise", json=body, timeout=30)
        resp.raise_for_status()
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    _emit(resp.json())


@main.command()
@click.option("--seed", default=42, type=int)
@click.option("--per-category", default=10, type=int)
@click.option("--spec", "spec_path", type=click.Path(exists=True))
def sample(seed: int, per_category: int, spec_path: str | None) -> None:
    """Stratified profile sample, evenly split across categories."""
    from .evaluation import sample_profiles

    try:
        spec = _load_spec(spec_path)
        profiles = sample_profiles(seed, spec, per_category)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    _emit(
        [
            {
                "answers": list(p.answers),
                "category": questionnaire.infer(p, spec).category.name,
            }
            for p in profiles
        ]
    )


@main.command()
@click.option("--backend", default="mock", type=click.Choice(["mock"]))
@click.option("--profiles", "profile_count", default=40, type=int)
@click.option("--repetitions", default=1, type=int)
@click.option("--seed", default=42, type=int)
@click.option("--out", "outdir", default="results/bench", type=click.Path())
def bench(backend, profile_count, repetitions, seed, outdir) -> None:
    """Benchmark prove/verify timings over a stratified profile sample."""
    from .evaluation import bench_attestation, sample_profiles, write_bench_report

    try:
        spec = default_spec()
        per_category = max(1, profile_count // 4)
        profiles = sample_profiles(seed, spec, per_category)
        records = bench_attestation(make_backend(backend), profiles, spec, repetitions)
        paths = write_bench_report(records, outdir, unavailable=["external-zkvm"])
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(f"wrote {paths['csv']} and {paths['md']}", err=True)
    _emit({"rows": len(records), "report": str(paths["md"])})


@main.group(name="eval")
def eval_group() -> None:
    """Dataset generation and condition runs."""


@eval_group.command(name="gen")
@click.option("--domains", default=10, type=int)
@click.option("--concepts", default=100, type=int)
@click.option("--out", "out_path", default="corpus.jsonl", type=click.Path())
def eval_gen(domains: int, concepts: int, out_path: str) -> None:
    """Synthesize an evaluation corpus and write it as JSON lines."""
    from .evaluation import synthesize_corpus
    from .evaluation.corpus import write_corpus

    try:
        instances = synthesize_corpus(domains, concepts)
        write_corpus(instances, out_path)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(f"wrote {len(instances)} instances to {out_path}", err=True)
    _emit({"instances": len(instances), "path": out_path})


@eval_group.command(name="run")
@click.option("--provider", default="stub", type=click.Choice(["stub"]))
@click.option("--seed", default=7, type=int)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True))
@click.option("--jobs", default=1, type=int)
@click.option("--limit", type=int, help="Run only the first N instances.")
@click.option("--out", "outdir", default="results/eval", type=click.Path())
def eval_run(provider, seed, corpus_path, jobs, limit, outdir) -> None:
    """Run Cond0..Cond4 over the corpus and write CSV/JSON/markdown reports."""
    from .evaluation import load_fixture_corpus, run_conditions, write_reports
    from .evaluation.corpus import load_corpus
    from .llm import make_client

    try:
        if corpus_path:
            instances, dropped = load_corpus(corpus_path)
            if dropped:
                click.echo(f"dropped {dropped} invalid instances", err=True)
        else:
            instances = load_fixture_corpus()
        if limit:
            instances = instances[:limit]
        llm = make_client(provider)
        records, failures = run_conditions(instances, llm, seed, jobs=jobs)
        paths = write_reports(records, failures, outdir, seed)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(
        f"{len(records)} records, {len(failures)} failures -> {paths['md']}", err=True
    )
    _emit({"records": len(records), "failures": len(failures), "report": str(paths["md"])})


@main.group()
def serve() -> None:
    """Run the HTTP services."""


def _split_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    return host or "127.0.0.1", int(port)


@serve.command(name="prover")
@click.option("--addr", default="127.0.0.1:8001")
@click.option("--backend", default="mock", type=click.Choice(["mock"]))
@click.option("--spec", "spec_path", type=click.Path(exists=True))
@click.option("--log", "log_path", type=click.Path())
def serve_prover(addr, backend, spec_path, log_path) -> None:
    """Run Entity 1 (proof issuance)."""
    import uvicorn

    from .prover_service import ProverConfig, create_app

    config = ProverConfig(
        spec=_load_spec(spec_path),
        backend=make_backend(backend),
        log_path=Path(log_path) if log_path else None,
    )
    host, port = _split_addr(addr)
    uvicorn.run(create_app(config), host=host, port=port)


@serve.command(name="advisor")
@click.option("--addr", default="127.0.0.1:8002")
@click.option("--provider", default="stub", type=click.Choice(["stub"]))
@click.option("--program-version", default=questionnaire.PROGRAM_VERSION)
def serve_advisor(addr, provider, program_version) -> None:
    """Run Entity 2 (verification + advice)."""
    import uvicorn

    from .advisor_service import AdvisorConfig, create_app
    from .llm import make_client

    config = AdvisorConfig(pinned=program_id(program_version), llm=make_client(provider))
    host, port = _split_addr(addr)
    uvicorn.run(create_app(config), host=host, port=port)


if __name__ == "__main__":
    main()
