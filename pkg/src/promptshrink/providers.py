"""LLM providers: deterministic local mocks and an OpenAI-compatible HTTP client."""

from __future__ import annotations

import hashlib
import os
import random
import threading
import time
from typing import Protocol, runtime_checkable

import httpx

from .exceptions import ConfigurationError, ProviderError, ProviderTimeout
from .pos import PosLexicon, pos_tag, token_compress
from .segment import split_sentences
from .text import Chunk, count_tokens, render_tokens

# Generation instruction for candidate compressions. Mock providers locate the
# source passage after SOURCE_MARKER; real models just read the whole prompt.
SOURCE_MARKER = "### Passage"
COMPRESSION_INSTRUCTION = """\
Shorten the passage below by deleting words. Do not add, reorder or rephrase anything.
Keep nouns first, then verbs; adjectives and adverbs go before anything else.
Never delete names, numbers or negations.
Drop intensifiers, lists of examples and side remarks set off by commas or dashes.
Drop relative clauses that only add description.
Around a contrast word (but, however, yet) keep the clause after it.
Reply with the shortened passage only."""


def build_prompt(source: str) -> str:
    return f"{COMPRESSION_INSTRUCTION}\n\n{SOURCE_MARKER}\n{source}"


def extract_source(prompt: str) -> str:
    """Passage embedded by :func:`build_prompt`; the whole prompt if unmarked."""
    head, sep, tail = prompt.partition(SOURCE_MARKER + "\n")
    return tail if sep else prompt


@runtime_checkable
class LLMProvider(Protocol):
    """Text-in, text-out model. ``name`` doubles as the class label of a sample."""

    name: str
    version: str

    def generate(self, prompt: str, max_tokens: int | None = None) -> str: ...


class SimulatedClock:
    """Monotonic clock that only moves when advanced; stands in for perf_counter."""

    def __init__(self, start: float = 0.0):
        self._t = start
        self._lock = threading.Lock()

    def __call__(self) -> float:
        return self._t

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("clock cannot go backwards")
        with self._lock:
            self._t += seconds


class EchoProvider:
    name = "echo"
    version = "1"

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        return extract_source(prompt)


class NoiseProvider:
    """Unrelated pseudo-words, seeded from the passage so reruns agree."""

    name = "noise"
    version = "1"

    def __init__(self, length: int = 12):
        self.length = length

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        seed = hashlib.blake2b(extract_source(prompt).encode("utf-8"), digest_size=8).digest()
        rng = random.Random(int.from_bytes(seed, "big"))
        words = ["".join(rng.choice("qxzjvk") + rng.choice("aeiou") for _ in range(3)) for _ in range(self.length)]
        return " ".join(words).capitalize() + "."


class AdverbDropProvider:
    """Deletes every token tagged as an adverb."""

    name = "adverb-drop"
    version = "1"

    def __init__(self, lexicon: PosLexicon | None = None):
        self.lexicon = lexicon or PosLexicon.default()

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        out = []
        for sent in split_sentences(extract_source(prompt)):
            tagged = pos_tag(sent, self.lexicon)
            kept = [t for t in tagged.tokens if t.pos != "adverb"]
            if kept:
                out.append(render_tokens(kept))
        return " ".join(out)


class RuleProvider:
    """Applies the local rule engine at a fixed level."""

    version = "1"

    def __init__(self, level: int = 3, lexicon: PosLexicon | None = None):
        if not 1 <= level <= 5:
            raise ConfigurationError("level must be in 1..5")
        self.level = level
        self.name = f"ppc-l{level}"
        self.lexicon = lexicon or PosLexicon.default()

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        chunk = Chunk(0, tuple(split_sentences(extract_source(prompt))))
        return token_compress(chunk, self.level, self.lexicon).text


class LinearLatencyProvider:
    """Echo model whose call costs ``a + b * tokens(prompt)`` on a simulated clock."""

    version = "1"

    def __init__(self, clock: SimulatedClock, b: float = 0.001, a: float = 0.0, name: str = "linear-mock"):
        self.clock, self.a, self.b, self.name = clock, a, b, name

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        self.clock.advance(self.a + self.b * count_tokens(prompt))
        return prompt


class OpenAIChatProvider:
    """Chat-completions client for any OpenAI-compatible endpoint.

    The API key is read from ``api_key_env`` when the provider is built, so a
    missing credential fails early and names the variable. Calls are capped at
    ``max_in_flight``, spaced by at least ``1 / requests_per_second`` and
    retried with exponential backoff on 429, 5xx and transport errors.
    """

    def __init__(
        self,
        model: str,
        base_url: str = "https://api.openai.com/v1",
        api_key_env: str = "OPENAI_API_KEY",
        max_in_flight: int = 4,
        requests_per_second: float = 2.0,
        retries: int = 4,
        timeout: float = 60.0,
        temperature: float = 0.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        key = os.environ.get(api_key_env)
        if not key:
            raise ConfigurationError(f"environment variable {api_key_env} is not set")
        if requests_per_second <= 0:
            raise ConfigurationError("requests_per_second must be > 0")
        self.model = model
        self.name = model
        self.version = f"{base_url.rstrip('/')}#{model}"
        self.retries = retries
        self.temperature = temperature
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {key}"},
            timeout=timeout,
            transport=transport,
        )
        self._gate = threading.Semaphore(max_in_flight)
        self._interval = 1.0 / requests_per_second
        self._next_slot = 0.0
        self._slot_lock = threading.Lock()
        self._sleep = sleep

    def _wait_for_slot(self) -> None:
        with self._slot_lock:
            now = time.monotonic()
            wait = max(0.0, self._next_slot - now)
            self._next_slot = max(now, self._next_slot) + self._interval
        if wait:
            self._sleep(wait)

    def generate(self, prompt: str, max_tokens: int | None = None) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
        }
        if max_tokens is not None:
            body["max_tokens"] = max_tokens
        last = "no attempts made"
        for attempt in range(self.retries):
            self._wait_for_slot()
            try:
                with self._gate:
                    resp = self._client.post("/chat/completions", json=body)
            except httpx.TimeoutException as exc:
                last = f"timeout: {exc}"
                if attempt + 1 == self.retries:
                    raise ProviderTimeout(f"{self.name}: {last}") from exc
            except httpx.TransportError as exc:
                last = f"transport: {exc}"
            else:
                if resp.status_code == 200:
                    try:
                        return resp.json()["choices"][0]["message"]["content"] or ""
                    except (KeyError, IndexError, ValueError) as exc:
                        raise ProviderError(f"{self.name}: malformed response") from exc
                if resp.status_code != 429 and resp.status_code < 500:
                    raise ProviderError(f"{self.name}: HTTP {resp.status_code}: {resp.text[:200]}")
                last = f"HTTP {resp.status_code}"
                retry_after = resp.headers.get("retry-after")
                if retry_after and retry_after.replace(".", "", 1).isdigit():
                    self._sleep(float(retry_after))
                    continue
            if attempt + 1 < self.retries:
                self._sleep(min(0.5 * 2**attempt, 16.0))
        raise ProviderError(f"{self.name}: failed after {self.retries} attempts ({last})")

    def close(self) -> None:
        self._client.close()


LOCAL_PROVIDERS = ("echo", "noise", "adverb-drop", "ppc-l1", "ppc-l2", "ppc-l3", "ppc-l4", "ppc-l5")


def resolve_provider(spec: str, settings: dict[str, str] | None = None) -> LLMProvider:
    """Build a provider from a short name.

    Local names are listed in ``LOCAL_PROVIDERS``; ``openai:MODEL`` builds an
    HTTP client using the ``base_url`` and ``api_key_env`` settings if given.
    """
    settings = settings or {}
    spec = spec.strip()
    if spec == "echo":
        return EchoProvider()
    if spec == "noise":
        return NoiseProvider()
    if spec == "adverb-drop":
        return AdverbDropProvider()
    if spec.startswith("ppc-l") and spec[5:].isdigit():
        return RuleProvider(int(spec[5:]))
    if spec.startswith("openai:") and len(spec) > 7:
        kwargs = {k: settings[k] for k in ("base_url", "api_key_env") if k in settings}
        return OpenAIChatProvider(spec[7:], **kwargs)
    raise ConfigurationError(f"unknown provider {spec!r}")
