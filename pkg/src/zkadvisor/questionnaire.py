"""Rule-based risk-tolerance inference over a 10-question questionnaire.

Everything here is pure and deterministic: the same profile and the same
questionnaire always produce the same score, category and digest, so the
whole computation can be attested by a proof backend.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from importlib import resources

PROGRAM_VERSION = "1.0.0"
NUM_QUESTIONS = 10
NUM_OPTIONS = 3
PROFILE_SPACE = NUM_OPTIONS**NUM_QUESTIONS  # 59,049

MAX_SCORE = 20

# Canonical byte layout separators: 0x1F between fields, 0x1E between records.
UNIT_SEP = b"\x1f"
RECORD_SEP = b"\x1e"


class MalformedInput(ValueError):
    """Input is not a valid profile document."""


class WrongAnswerCount(MalformedInput):
    """Profile does not contain exactly 10 answers."""


class OutOfRangeAnswer(MalformedInput):
    """An answer index is outside 0..2."""


class ScoreOutOfRange(ValueError):
    """Total score outside 0..20; spec/profile mismatch."""


class InvalidSpec(ValueError):
    """Questionnaire definition violates its invariants."""


class RiskCategory(IntEnum):
    CONSERVATIVE = 0
    STEADY_GROWTH = 1
    BALANCED = 2
    AGGRESSIVE = 3

    @property
    def label(self) -> str:
        return _CATEGORY_LABELS[self]


_CATEGORY_LABELS = {
    RiskCategory.CONSERVATIVE: "Conservative",
    RiskCategory.STEADY_GROWTH: "Steady Growth",
    RiskCategory.BALANCED: "Balanced",
    RiskCategory.AGGRESSIVE: "Aggressive Investment",
}

# Score thresholds: inclusive upper bound per category, in ordinal order.
_CATEGORY_UPPER_BOUNDS = (5, 10, 15, 20)


@dataclass(frozen=True)
class Question:
    id: int
    text: str
    options: tuple[str, str, str]
    option_points: tuple[int, int, int]

    def __post_init__(self) -> None:
        if not self.text:
            raise InvalidSpec(f"question {self.id}: empty text")
        if len(self.options) != NUM_OPTIONS or any(not o for o in self.options):
            raise InvalidSpec(f"question {self.id}: need 3 non-empty options")
        pts = self.option_points
        if len(pts) != NUM_OPTIONS or any(p < 0 or p > 2 for p in pts):
            raise InvalidSpec(f"question {self.id}: points must be in 0..2")
        if not (pts[0] < pts[1] < pts[2]):
            raise InvalidSpec(f"question {self.id}: points must be strictly increasing")


@dataclass(frozen=True)
class QuestionnaireSpec:
    version: str
    questions: tuple[Question, ...]

    def __post_init__(self) -> None:
        if not self.version:
            raise InvalidSpec("empty version")
        if len(self.questions) != NUM_QUESTIONS:
            raise InvalidSpec(f"need exactly {NUM_QUESTIONS} questions")
        for i, q in enumerate(self.questions):
            if q.id != i:
                raise InvalidSpec(f"question ids must be 0..9 in order, got {q.id} at {i}")

    @classmethod
    def from_dict(cls, doc: dict) -> "QuestionnaireSpec":
        try:
            questions = tuple(
                Question(
                    id=int(q["id"]),
                    text=str(q["text"]),
                    options=tuple(str(o) for o in q["options"]),
                    option_points=tuple(int(p) for p in q["option_points"]),
                )
                for q in doc["questions"]
            )
            return cls(version=str(doc["version"]), questions=questions)
        except (KeyError, TypeError) as exc:
            raise InvalidSpec(f"bad questionnaire document: {exc}") from exc

    @classmethod
    def from_file(cls, path: str) -> "QuestionnaireSpec":
        with open(path, "rb") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class AnswerProfile:
    """Private questionnaire answers; never leaves the prover side."""

    answers: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.answers) != NUM_QUESTIONS:
            raise WrongAnswerCount(f"expected {NUM_QUESTIONS} answers, got {len(self.answers)}")
        for a in self.answers:
            if a not in (0, 1, 2):
                raise OutOfRangeAnswer(f"answer index {a} outside 0..2")

    def serialize(self) -> bytes:
        return json.dumps({"answers": list(self.answers)}, separators=(",", ":")).encode()


@dataclass(frozen=True)
class InferenceResult:
    category: RiskCategory
    total_score: int
    spec_digest: bytes
    program_version: str


@lru_cache(maxsize=1)
def default_spec() -> QuestionnaireSpec:
    raw = resources.files("zkadvisor.data").joinpath("questionnaire.json").read_bytes()
    return QuestionnaireSpec.from_dict(json.loads(raw))


def parse_profile(raw: bytes | str) -> AnswerProfile:
    """Strictly parse a private profile JSON document."""
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be a JSON object")
    if set(doc.keys()) != {"answers"}:
        raise MalformedInput("expected exactly one key: 'answers'")
    answers = doc["answers"]
    if not isinstance(answers, list) or not all(
        isinstance(a, int) and not isinstance(a, bool) for a in answers
    ):
        raise MalformedInput("'answers' must be a list of integers")
    if len(answers) != NUM_QUESTIONS:
        raise WrongAnswerCount(f"expected {NUM_QUESTIONS} answers, got {len(answers)}")
    for a in answers:
        if a not in (0, 1, 2):
            raise OutOfRangeAnswer(f"answer index {a} outside 0..2")
    return AnswerProfile(answers=tuple(answers))


def canonical_question_bytes(spec: QuestionnaireSpec) -> bytes:
    """Bit-exact layout: version 0x1E (text 0x1F opt0 0x1F opt1 0x1F opt2 0x1E) x10."""
    parts = [spec.version.encode("utf-8"), RECORD_SEP]
    for q in spec.questions:
        parts.append(UNIT_SEP.join(s.encode("utf-8") for s in (q.text, *q.options)))
        parts.append(RECORD_SEP)
    return b"".join(parts)


def spec_digest(spec: QuestionnaireSpec, program_version: str = PROGRAM_VERSION) -> bytes:
    h = hashlib.sha256()
    h.update(program_version.encode("utf-8"))
    h.update(RECORD_SEP)
    h.update(canonical_question_bytes(spec))
    return h.digest()


def score(profile: AnswerProfile, spec: QuestionnaireSpec) -> int:
    return sum(q.option_points[a] for q, a in zip(spec.questions, profile.answers))


def classify(total_score: int) -> RiskCategory:
    if not 0 <= total_score <= MAX_SCORE:
        raise ScoreOutOfRange(f"total score {total_score} outside 0..{MAX_SCORE}")
    for category, upper in zip(RiskCategory, _CATEGORY_UPPER_BOUNDS):
        if total_score <= upper:
            return category
    raise AssertionError("unreachable: bounds cover 0..20")


def infer(profile: AnswerProfile, spec: QuestionnaireSpec) -> InferenceResult:
    total = score(profile, spec)
    return InferenceResult(
        category=classify(total),
        total_score=total,
        spec_digest=spec_digest(spec),
        program_version=PROGRAM_VERSION,
    )


def enumerate_category_counts(spec: QuestionnaireSpec) -> dict[RiskCategory, int]:
    """Exhaustively classify all 3^10 profiles."""
    point_rows = [q.option_points for q in spec.questions]
    counts = {c: 0 for c in RiskCategory}
    for combo in itertools.product(range(NUM_OPTIONS), repeat=NUM_QUESTIONS):
        total = sum(row[a] for row, a in zip(point_rows, combo))
        counts[classify(total)] += 1
    return counts
