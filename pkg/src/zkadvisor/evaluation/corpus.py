"""Evaluation corpus: 10 domains x 100 binary opposing concepts.

Each instance pairs a "negative"-pole trait text (d0) with a
"positive"-pole trait text (d1) and five predefined actions scored -2..+2.
A synthesized fixture corpus is committed so evaluation runs offline;
instances failing validation are dropped and counted rather than aborting
a run.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..prompting import ScoredOption, validate_option_set


class GenerationSourceUnavailable(RuntimeError):
    pass


@dataclass(frozen=True)
class EvalInstance:
    instance_id: str
    domain: str
    negative_pole: str
    positive_pole: str
    d0_text: str
    d1_text: str
    query: str
    options: tuple[ScoredOption, ...]

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "domain": self.domain,
            "concept": {"negative": self.negative_pole, "positive": self.positive_pole},
            "d0_text": self.d0_text,
            "d1_text": self.d1_text,
            "query": self.query,
            "options": [{"text": o.text, "score": o.score} for o in self.options],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalInstance":
        options = validate_option_set(
            [ScoredOption(text=o["text"], score=int(o["score"])) for o in doc["options"]]
        )
        instance = cls(
            instance_id=str(doc["instance_id"]),
            domain=str(doc["domain"]),
            negative_pole=str(doc["concept"]["negative"]),
            positive_pole=str(doc["concept"]["positive"]),
            d0_text=str(doc["d0_text"]),
            d1_text=str(doc["d1_text"]),
            query=str(doc["query"]),
            options=options,
        )
        for text in (instance.d0_text, instance.d1_text, instance.query):
            if not text:
                raise ValueError("instance texts must be non-empty")
        return instance


_DOMAIN_TOPICS = {
    "healthcare": ["headache", "back pain", "sleep quality", "daily diet", "health screening"],
    "investment": ["stock allocation", "bond allocation", "emergency savings", "new fund purchase", "portfolio rebalancing"],
    "career": ["job change", "skill training", "salary negotiation", "side project", "promotion path"],
    "education": ["online course", "degree program", "language study", "exam preparation", "study schedule"],
    "fitness": ["strength training", "running plan", "recovery days", "workout intensity", "training goals"],
    "travel": ["trip booking", "itinerary planning", "travel insurance", "destination choice", "travel budget"],
    "nutrition": ["meal planning", "calorie tracking", "supplement use", "sugar intake", "protein intake"],
    "relationships": ["difficult conversation", "new friendship", "family visit", "conflict resolution", "social plans"],
    "housing": ["home purchase", "lease renewal", "renovation project", "moving decision", "mortgage refinance"],
    "retirement": ["pension contribution", "retirement age", "annuity purchase", "withdrawal rate", "estate planning"],
}

_POLE_PAIRS = [
    ("caution", "proactiveness"),
    ("risk aversion", "risk seeking"),
    ("pessimism", "optimism"),
    ("hesitation", "decisiveness"),
    ("restraint", "ambition"),
    ("skepticism", "confidence"),
    ("frugality", "generosity"),
    ("patience", "urgency"),
    ("conservatism", "innovation"),
    ("doubt", "conviction"),
    ("avoidance", "engagement"),
    ("passivity", "initiative"),
    ("worry", "composure"),
    ("reluctance", "eagerness"),
    ("rigidity", "flexibility"),
    ("dependence", "autonomy"),
    ("indecision", "resolve"),
    ("timidity", "boldness"),
    ("resignation", "persistence"),
    ("wariness", "openness"),
]


def _make_instance(domain: str, index: int, negative: str, positive: str, topic: str) -> EvalInstance:
    options = validate_option_set(
        [
            ScoredOption(text=f"Fully embrace {positive} and act on {topic} without delay.", score=2),
            ScoredOption(text=f"Lean toward {positive} while keeping an eye on {topic}.", score=1),
            ScoredOption(text=f"Balance {negative} and {positive} considerations around {topic}.", score=0),
            ScoredOption(text=f"Lean toward {negative} and postpone major changes to {topic}.", score=-1),
            ScoredOption(text=f"Fully embrace {negative} and hold off on any change to {topic}.", score=-2),
        ]
    )
    return EvalInstance(
        instance_id=f"{domain}-{index:03d}",
        domain=domain,
        negative_pole=negative,
        positive_pole=positive,
        d0_text=f"The user tends toward {negative} in {topic} decisions and prefers to avoid uncertainty.",
        d1_text=f"The user tends toward {positive} in {topic} decisions and is comfortable taking initiative.",
        query=f"What action should the user take about {topic}?",
        options=options,
    )


def synthesize_corpus(
    domains: int = 10, concepts_per_domain: int = 100
) -> list[EvalInstance]:
    """Deterministic corpus generator (the offline stand-in for an LLM
    dataset source)."""
    if domains > len(_DOMAIN_TOPICS):
        raise GenerationSourceUnavailable(f"only {len(_DOMAIN_TOPICS)} domains available")
    if concepts_per_domain > len(_POLE_PAIRS) * 5:
        raise GenerationSourceUnavailable("not enough concept material")
    instances = []
    for domain in list(_DOMAIN_TOPICS)[:domains]:
        topics = _DOMAIN_TOPICS[domain]
        for index in range(concepts_per_domain):
            negative, positive = _POLE_PAIRS[index % len(_POLE_PAIRS)]
            topic = topics[index // len(_POLE_PAIRS)]
            instances.append(_make_instance(domain, index, negative, positive, topic))
    return instances


def validate_instances(raw_docs: list[dict]) -> tuple[list[EvalInstance], int]:
    """Parse instance documents, dropping and counting invalid ones."""
    valid: list[EvalInstance] = []
    dropped = 0
    for doc in raw_docs:
        try:
            valid.append(EvalInstance.from_dict(doc))
        except (ValueError, KeyError, TypeError):
            dropped += 1
    return valid, dropped


def write_corpus(instances: list[EvalInstance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for instance in instances:
            fh.write(json.dumps(instance.to_dict(), sort_keys=True) + "\n")


def load_corpus(path: str | Path) -> tuple[list[EvalInstance], int]:
    with open(path, "r", encoding="utf-8") as fh:
        docs = [json.loads(line) for line in fh if line.strip()]
    return validate_instances(docs)


def load_fixture_corpus() -> list[EvalInstance]:
    raw = resources.files("zkadvisor.data").joinpath("corpus.jsonl").read_text("utf-8")
    docs = [json.loads(line) for line in raw.splitlines() if line.strip()]
    instances, dropped = validate_instances(docs)
    if dropped:
        raise ValueError(f"fixture corpus contains {dropped} invalid instances")
    return instances
