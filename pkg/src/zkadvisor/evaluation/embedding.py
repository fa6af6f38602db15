"""Hashed bag-of-words embedding: 256 buckets, fixed 64-bit token hash,
L2-normalized counts. Deterministic across runs and platforms."""
from __future__ import annotations

import hashlib
import math
import re

EMBED_DIM = 256

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmptyText(ValueError):
    """Text has no tokens; no embedding exists."""


def _bucket(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % EMBED_DIM


def embed(text: str) -> tuple[float, ...]:
    tokens = _TOKEN_RE.findall(text.lower())
    if not tokens:
        raise EmptyText("cannot embed text with no tokens")
    counts = [0.0] * EMBED_DIM
    for token in tokens:
        counts[_bucket(token)] += 1.0
    norm = math.sqrt(sum(c * c for c in counts))
    return tuple(c / norm for c in counts)


def cosine_similarity(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    return max(-1.0, min(1.0, dot))
