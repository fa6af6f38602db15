"""Two-stage advice generation: pick a proposal from five scored options,
then explain it, each stage under its own emphasis-derived context.

Trait material is partitioned into d0 (free-text, unverified) and d1
(claims rendered from verified journals). Contexts c0..c3 vary how much
weight each partition gets; a condition pairs a proposal context with an
explanation context.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .llm import ChatRequest


class ProposalParseFailure(RuntimeError):
    """Model never produced a parseable option index."""

    def __init__(self, raw_outputs: list[str]) -> None:
        super().__init__(f"no option index after {len(raw_outputs)} attempts")
        self.raw_outputs = raw_outputs


class EmptyModelOutput(RuntimeError):
    pass


class EmphasisLevel(IntEnum):
    NONE = 0
    MODERATE = 1
    STRONG = 2

    @classmethod
    def parse(cls, name: str) -> "EmphasisLevel":
        return cls[name.upper()]

    @property
    def word(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class TraitPartition:
    d0_text: str
    d1_claims: tuple[str, ...] = ()

    @property
    def combined_text(self) -> str:
        return "\n".join([self.d0_text, *self.d1_claims]).strip()


@dataclass(frozen=True)
class Context:
    id: str
    emphasis_d0: EmphasisLevel
    emphasis_d1: EmphasisLevel
    rendered_text: str


@dataclass(frozen=True)
class ConditionConfig:
    name: str
    c_prop: str
    c_exp: str


@dataclass(frozen=True)
class ScoredOption:
    text: str
    score: int

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("option text must be non-empty")
        if self.score not in (-2, -1, 0, 1, 2):
            raise ValueError(f"score {self.score} outside -2..+2")


def validate_option_set(options: list[ScoredOption] | tuple[ScoredOption, ...]) -> tuple[ScoredOption, ...]:
    if len(options) != 5 or {o.score for o in options} != {-2, -1, 0, 1, 2}:
        raise ValueError("option set must hold 5 options with distinct scores covering -2..+2")
    return tuple(options)


@dataclass(frozen=True)
class Proposal:
    selected: ScoredOption
    raw_model_output: str
    retries_used: int


@dataclass(frozen=True)
class Explanation:
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise EmptyModelOutput("explanation must be non-empty")


def _read_template(name: str, template_dir: str | None) -> str:
    if template_dir is not None:
        return (Path(template_dir) / name).read_text(encoding="utf-8")
    return resources.files("zkadvisor.data.templates").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_context_matrix() -> dict[str, tuple[EmphasisLevel, EmphasisLevel]]:
    raw = resources.files("zkadvisor.data").joinpath("conditions.json").read_bytes()
    doc = json.loads(raw)
    return {
        cid: (EmphasisLevel.parse(spec["d0"]), EmphasisLevel.parse(spec["d1"]))
        for cid, spec in doc["contexts"].items()
    }


@lru_cache(maxsize=1)
def default_conditions() -> dict[str, ConditionConfig]:
    raw = resources.files("zkadvisor.data").joinpath("conditions.json").read_bytes()
    doc = json.loads(raw)
    contexts = set(doc["contexts"])
    out = {}
    for name, pair in doc["conditions"].items():
        if pair["c_prop"] not in contexts or pair["c_exp"] not in contexts:
            raise ValueError(f"{name} references an unknown context id")
        out[name] = ConditionConfig(name=name, c_prop=pair["c_prop"], c_exp=pair["c_exp"])
    return out


def render_context(
    cid: str,
    emphasis_d0: EmphasisLevel,
    emphasis_d1: EmphasisLevel,
    partition: TraitPartition,
    template_dir: str | None = None,
) -> Context:
    header = _read_template("context_header.txt", template_dir).format(
        id=cid, d0_level=emphasis_d0.word, d1_level=emphasis_d1.word
    )
    parts = [header.rstrip("\n")]
    if emphasis_d0 > EmphasisLevel.NONE and partition.d0_text:
        parts.append(
            _read_template("d0_block.txt", template_dir)
            .format(emphasis=emphasis_d0.word, d0=partition.d0_text)
            .rstrip("\n")
        )
    if emphasis_d1 > EmphasisLevel.NONE and partition.d1_claims:
        parts.append(
            _read_template("d1_block.txt", template_dir)
            .format(emphasis=emphasis_d1.word, d1="\n".join(partition.d1_claims))
            .rstrip("\n")
        )
    return Context(
        id=cid,
        emphasis_d0=emphasis_d0,
        emphasis_d1=emphasis_d1,
        rendered_text="\n".join(parts) + "\n",
    )


def build_context_set(
    partition: TraitPartition, template_dir: str | None = None
) -> dict[str, Context]:
    """Render c0..c3 for one trait partition."""
    return {
        cid: render_context(cid, d0, d1, partition, template_dir)
        for cid, (d0, d1) in default_context_matrix().items()
    }


def render_options(options: tuple[ScoredOption, ...]) -> str:
    return "\n".join(f"{i}. [{o.score:+d}] {o.text}" for i, o in enumerate(options, start=1))


_INDEX_RE = re.compile(r"\b([1-5])\b")

_RETRY_REMINDER = "\nAnswer with a single digit between 1 and 5 and nothing else."


def propose(
    llm,
    query: str,
    context: Context,
    options: tuple[ScoredOption, ...],
    template_dir: str | None = None,
    seed: int | None = None,
    max_retries: int = 3,
) -> Proposal:
    options = validate_option_set(options)
    instructions = _read_template("proposal_instructions.txt", template_dir).format(
        query=query, options=render_options(options)
    )
    raw_outputs: list[str] = []
    user_text = instructions
    for attempt in range(max_retries + 1):
        response = llm.chat(
            ChatRequest(system_text=context.rendered_text, user_text=user_text, seed=seed)
        )
        raw_outputs.append(response.text)
        m = _INDEX_RE.search(response.text)
        if m:
            return Proposal(
                selected=options[int(m.group(1)) - 1],
                raw_model_output=response.text,
                retries_used=attempt,
            )
        user_text = instructions + _RETRY_REMINDER
    raise ProposalParseFailure(raw_outputs)


def explain(
    llm,
    query: str,
    proposal: Proposal,
    context: Context,
    template_dir: str | None = None,
    seed: int | None = None,
) -> Explanation:
    instructions = _read_template("explanation_instructions.txt", template_dir).format(
        query=query, proposal=proposal.selected.text
    )
    response = llm.chat(
        ChatRequest(system_text=context.rendered_text, user_text=instructions, seed=seed)
    )
    if not response.text.strip():
        raise EmptyModelOutput("provider returned an empty explanation")
    return Explanation(text=response.text)


@lru_cache(maxsize=1)
def option_presets() -> dict[str, tuple[ScoredOption, ...]]:
    raw = resources.files("zkadvisor.data").joinpath("option_presets.json").read_bytes()
    doc = json.loads(raw)
    return {
        name: validate_option_set([ScoredOption(text=o["text"], score=int(o["score"])) for o in opts])
        for name, opts in doc.items()
    }
