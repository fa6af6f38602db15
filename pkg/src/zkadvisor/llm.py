"""Provider-neutral chat client: a deterministic stub plus a generic remote adapter.

The stub reads the structured marker lines that the prompt builder embeds
(`%% context ...`, `%% task ...`, block delimiters) and answers from a fixed
conditional score distribution, so the whole evaluation pipeline runs
offline and reproducibly. It performs no network access by construction.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import httpx


class ProviderUnavailable(RuntimeError):
    """Provider cannot be reached."""


class ProviderRejected(RuntimeError):
    """Provider refused the request (4xx-equivalent)."""


class ProviderTimeout(RuntimeError):
    """Provider did not answer in time."""


@dataclass(frozen=True)
class ChatRequest:
    system_text: str
    user_text: str
    temperature: float = 0.0
    max_tokens: int = 512
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.system_text or not self.user_text:
            raise ValueError("system_text and user_text must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    provider_id: str
    latency_ms: int


_CONTEXT_RE = re.compile(r"^%% context id=(\S+) d0=(\S+) d1=(\S+)$", re.MULTILINE)
_TASK_RE = re.compile(r"^%% task (\S+)$", re.MULTILINE)
_OPTION_RE = re.compile(r"^(\d)\. \[([+-]?\d)\] ", re.MULTILINE)


def _block(prompt: str, name: str) -> str | None:
    m = re.search(rf"%% {name}-begin\n(.*?)\n%% {name}-end", prompt, re.DOTALL)
    return m.group(1).strip() if m else None


@lru_cache(maxsize=1)
def _default_policy() -> dict:
    raw = resources.files("zkadvisor.data").joinpath("stub_policy.json").read_bytes()
    return json.loads(raw)


class StubChatClient:
    """Deterministic offline stand-in for a chat provider."""

    provider_id = "stub"

    def __init__(self, policy: dict | None = None) -> None:
        self._weights = (policy or _default_policy())["score_weights"]

    def chat(self, request: ChatRequest) -> ChatResponse:
        prompt = request.system_text + "\n" + request.user_text
        task = _TASK_RE.search(prompt)
        kind = task.group(1) if task else "freeform"
        if kind == "proposal":
            text = self._answer_proposal(prompt, request.seed)
        elif kind == "explanation":
            text = self._answer_explanation(prompt)
        else:
            text = "Acknowledged."
        return ChatResponse(text=text, provider_id=self.provider_id, latency_ms=0)

    def _rng(self, prompt: str, seed: int | None) -> random.Random:
        h = hashlib.sha256()
        h.update(str(seed if seed is not None else 0).encode())
        h.update(b"\x1e")
        h.update(prompt.encode("utf-8"))
        return random.Random(int.from_bytes(h.digest()[:8], "big"))

    def _answer_proposal(self, prompt: str, seed: int | None) -> str:
        ctx = _CONTEXT_RE.search(prompt)
        key = f"{ctx.group(2)},{ctx.group(3)}" if ctx else "none,none"
        weights = self._weights.get(key, self._weights["none,none"])
        scores = sorted(int(s) for s in weights)
        rng = self._rng(prompt, seed)
        target = rng.choices(scores, weights=[weights[str(s)] for s in scores])[0]
        by_score = {int(m.group(2)): int(m.group(1)) for m in _OPTION_RE.finditer(prompt)}
        if target in by_score:
            return str(by_score[target])
        # no option carries the sampled score; fall back to the closest one
        if by_score:
            nearest = min(by_score, key=lambda s: abs(s - target))
            return str(by_score[nearest])
        return "1"

    def _answer_explanation(self, prompt: str) -> str:
        proposal = _block(prompt, "proposal") or "the selected action"
        query = _block(prompt, "query")
        d0 = _block(prompt, "d0")
        d1 = _block(prompt, "d1")
        parts = [f"Recommended action: {proposal}"]
        if query:
            parts.append(f"This responds to the question: {query}")
        if d0:
            # block text starts with the template preamble line; keep only the traits
            parts.append(
                "It fits the user's stated profile: " + " ".join(d0.splitlines()[1:])
            )
        if d1:
            parts.append(
                "It aligns with the verified profile: " + " ".join(d1.splitlines()[1:])
            )
        return " ".join(parts)


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str
    model: str
    path: str = "/v1/chat/completions"
    auth_header: str = "Authorization"
    token_env: str = "LLM_API_TOKEN"
    timeout_ms: int = 30000


class RemoteChatClient:
    """Generic chat-completion HTTP adapter; one round trip, 2 retries on
    transient failure."""

    def __init__(self, config: RemoteConfig, client: httpx.Client | None = None) -> None:
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout_ms / 1000)

    @property
    def provider_id(self) -> str:
        return f"remote:{self.config.model}"

    def chat(self, request: ChatRequest) -> ChatResponse:
        body = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": request.user_text},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.seed is not None:
            body["seed"] = request.seed
        headers = {}
        token = os.environ.get(self.config.token_env)
        if token:
            headers[self.config.auth_header] = f"Bearer {token}"
        url = self.config.base_url.rstrip("/") + self.config.path
        started = time.perf_counter()
        last_exc: Exception | None = None
        for _ in range(3):  # 1 attempt + 2 retries
            try:
                resp = self._client.post(url, json=body, headers=headers)
            except httpx.TimeoutException as exc:
                last_exc = ProviderTimeout(str(exc))
                continue
            except httpx.TransportError as exc:
                last_exc = ProviderUnavailable(str(exc))
                continue
            if 400 <= resp.status_code < 500:
                raise ProviderRejected(f"{resp.status_code}: {resp.text[:500]}")
            if resp.status_code >= 500:
                last_exc = ProviderUnavailable(f"{resp.status_code}: {resp.text[:500]}")
                continue
            doc = resp.json()
            text = doc["choices"][0]["message"]["content"]
            latency = int((time.perf_counter() - started) * 1000)
            return ChatResponse(text=text, provider_id=self.provider_id, latency_ms=latency)
        raise last_exc if last_exc else ProviderUnavailable("no response")


def make_client(kind: str, remote: RemoteConfig | None = None):
    if kind == "stub":
        return StubChatClient()
    if kind == "remote":
        if remote is None:
            raise ValueError("remote provider requires a RemoteConfig")
        return RemoteChatClient(remote)
    raise ValueError(f"unknown provider kind: {kind}")
