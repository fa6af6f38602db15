"""Condition runs Cond0..Cond4 over the corpus, plus report writing.

Each trial derives its own seed from (global seed, instance id, condition
name), so parallel execution cannot change results. Reports contain no
timestamps and are byte-identical across runs for the same seed.
"""
from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..prompting import (
    ConditionConfig,
    TraitPartition,
    build_context_set,
    default_conditions,
    explain,
    propose,
)
from .corpus import EvalInstance
from .embedding import cosine_similarity, embed


class EmptySelection(ValueError):
    """No records match the requested condition."""


@dataclass(frozen=True)
class EvalRecord:
    instance_id: str
    condition: str
    prop_score: int
    prop_text: str
    retries_used: int
    explanation: str
    sim_d0: float
    sim_d1: float
    sim_prop: float


def trial_seed(global_seed: int, instance_id: str, condition: str) -> int:
    h = hashlib.sha256(f"{global_seed}|{instance_id}|{condition}".encode())
    return int.from_bytes(h.digest()[:8], "big")


def _run_trial(
    instance: EvalInstance,
    condition: ConditionConfig,
    llm,
    global_seed: int,
    template_dir: str | None,
) -> EvalRecord:
    partition = TraitPartition(d0_text=instance.d0_text, d1_claims=(instance.d1_text,))
    contexts = build_context_set(partition, template_dir)
    seed = trial_seed(global_seed, instance.instance_id, condition.name)
    proposal = propose(
        llm, instance.query, contexts[condition.c_prop], instance.options, template_dir, seed=seed
    )
    explanation = explain(
        llm, instance.query, proposal, contexts[condition.c_exp], template_dir, seed=seed
    )
    exp_vec = embed(explanation.text)
    return EvalRecord(
        instance_id=instance.instance_id,
        condition=condition.name,
        prop_score=proposal.selected.score,
        prop_text=proposal.selected.text,
        retries_used=proposal.retries_used,
        explanation=explanation.text,
        sim_d0=cosine_similarity(exp_vec, embed(instance.d0_text)),
        sim_d1=cosine_similarity(exp_vec, embed(instance.d1_text)),
        sim_prop=cosine_similarity(exp_vec, embed(proposal.selected.text)),
    )


def run_conditions(
    instances: list[EvalInstance],
    llm,
    seed: int,
    conditions: dict[str, ConditionConfig] | None = None,
    jobs: int = 1,
    template_dir: str | None = None,
) -> tuple[list[EvalRecord], list[dict]]:
    """Run every (instance, condition) trial; per-trial failures are
    collected into a manifest instead of aborting the run."""
    conditions = conditions or default_conditions()
    trials = [(inst, cond) for inst in instances for cond in conditions.values()]

    def attempt(pair):
        inst, cond = pair
        try:
            return _run_trial(inst, cond, llm, seed, template_dir), None
        except Exception as exc:  # noqa: BLE001 - manifest captures everything
            return None, {
                "instance_id": inst.instance_id,
                "condition": cond.name,
                "error": f"{type(exc).__name__}: {exc}",
            }

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(attempt, trials))
    else:
        outcomes = [attempt(t) for t in trials]

    records = [r for r, _ in outcomes if r is not None]
    failures = [f for _, f in outcomes if f is not None]
    records.sort(key=lambda r: (r.instance_id, r.condition))
    failures.sort(key=lambda f: (f["instance_id"], f["condition"]))
    return records, failures


def score_distribution(
    records: list[EvalRecord], condition: str
) -> tuple[dict[int, int], float]:
    scores = [r.prop_score for r in records if r.condition == condition]
    if not scores:
        raise EmptySelection(f"no records for condition {condition}")
    histogram = {s: scores.count(s) for s in (-2, -1, 0, 1, 2)}
    return histogram, sum(scores) / len(scores)


def condition_summary(records: list[EvalRecord]) -> dict[str, dict]:
    summary: dict[str, dict] = {}
    for condition in sorted({r.condition for r in records}):
        rows = [r for r in records if r.condition == condition]
        histogram, mean_score = score_distribution(records, condition)
        n = len(rows)
        summary[condition] = {
            "trials": n,
            "mean_prop_score": mean_score,
            "score_histogram": {str(k): v for k, v in histogram.items()},
            "mean_sim_d0": sum(r.sim_d0 for r in rows) / n,
            "mean_sim_d1": sum(r.sim_d1 for r in rows) / n,
            "mean_sim_prop": sum(r.sim_prop for r in rows) / n,
        }
    return summary


def write_reports(
    records: list[EvalRecord],
    failures: list[dict],
    outdir: str | Path,
    seed: int,
) -> dict[str, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    csv_path = outdir / "records.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["instance_id", "condition", "prop_score", "retries_used", "sim_d0", "sim_d1", "sim_prop"]
        )
        for r in records:
            writer.writerow(
                [
                    r.instance_id,
                    r.condition,
                    r.prop_score,
                    r.retries_used,
                    f"{r.sim_d0:.6f}",
                    f"{r.sim_d1:.6f}",
                    f"{r.sim_prop:.6f}",
                ]
            )

    summary = condition_summary(records)
    json_path = outdir / "summary.json"
    json_path.write_text(
        json.dumps(
            {"seed": seed, "failures": failures, "conditions": summary},
            sort_keys=True,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )

    md_path = outdir / "summary.md"
    conditions = list(summary)
    lines = [
        "# Evaluation summary",
        "",
        f"Seed: {seed}. Trials per condition: "
        + ", ".join(f"{c}={summary[c]['trials']}" for c in conditions)
        + f". Failures: {len(failures)}.",
        "",
        "| Criteria | " + " | ".join(conditions) + " |",
        "|" + "---|" * (len(conditions) + 1),
    ]
    for label, key in [
        ("Mean proposal score", "mean_prop_score"),
        ("Similarity(explanation, d0)", "mean_sim_d0"),
        ("Similarity(explanation, d1)", "mean_sim_d1"),
        ("Similarity(explanation, proposal)", "mean_sim_prop"),
    ]:
        lines.append(
            f"| {label} | " + " | ".join(f"{summary[c][key]:.3f}" for c in conditions) + " |"
        )
    md_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    return {"csv": csv_path, "json": json_path, "md": md_path}
