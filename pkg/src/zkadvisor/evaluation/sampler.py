"""Stratified profile sampling over the 3^10 answer space."""
from __future__ import annotations

import random

from ..questionnaire import (
    NUM_OPTIONS,
    NUM_QUESTIONS,
    AnswerProfile,
    QuestionnaireSpec,
    RiskCategory,
    classify,
    default_spec,
    score,
)


class StratumExhausted(RuntimeError):
    """A category stratum could not be filled; questionnaire likely degenerate."""


def sample_profiles(
    seed: int,
    spec: QuestionnaireSpec | None = None,
    per_category: int = 10,
    max_attempts: int = 1_000_000,
) -> list[AnswerProfile]:
    """Rejection-sample distinct profiles, `per_category` from each category.

    Deterministic for a fixed seed; output grouped by category in ordinal
    order, draw order within each group.
    """
    spec = spec or default_spec()
    rng = random.Random(seed)
    buckets: dict[RiskCategory, list[AnswerProfile]] = {c: [] for c in RiskCategory}
    seen: set[tuple[int, ...]] = set()
    attempts = 0
    while any(len(b) < per_category for b in buckets.values()):
        attempts += 1
        if attempts > max_attempts:
            missing = [c.name for c, b in buckets.items() if len(b) < per_category]
            raise StratumExhausted(f"could not fill strata: {missing}")
        answers = tuple(rng.randrange(NUM_OPTIONS) for _ in range(NUM_QUESTIONS))
        if answers in seen:
            continue
        profile = AnswerProfile(answers=answers)
        category = classify(score(profile, spec))
        if len(buckets[category]) < per_category:
            seen.add(answers)
            buckets[category].append(profile)
    return [p for c in RiskCategory for p in buckets[c]]
