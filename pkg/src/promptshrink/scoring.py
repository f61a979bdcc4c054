"""Per-chunk relevance, importance, perplexity and combined weight."""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
import time
from collections import Counter
from typing import Iterable, Protocol, Sequence, runtime_checkable

import httpx
import numpy as np

from .exceptions import ConfigurationError, EmptyInputError, ProviderError
from .text import Chunk, Document, Sentence, Token, is_punctuation, tokenize


def cosine_sim(u: Sequence[float], v: Sequence[float]) -> float:
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


@runtime_checkable
class EmbeddingProvider(Protocol):
    name: str
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


def _terms(text: str) -> list[str]:
    return [t.lower() for t in tokenize(text) if not is_punctuation(t)]


def stable_bin(term: str, dimension: int) -> int:
    digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dimension


class HashingEmbedder:
    """Hashed bag-of-words vectors with optional IDF weighting.

    Without a registered corpus every term has IDF 1. ``fit`` registers one,
    using the smoothed ``ln((1 + N) / (1 + df)) + 1`` form.
    """

    name = "hashing-bow-v1"

    def __init__(self, dimension: int = 512):
        if dimension < 1:
            raise ConfigurationError("dimension must be >= 1")
        self.dimension = dimension
        self.idf: dict[str, float] = {}
        self.default_idf = 1.0

    def fit(self, corpus: Iterable[str]) -> "HashingEmbedder":
        docs = [set(_terms(t)) for t in corpus]
        n = len(docs)
        df: Counter[str] = Counter()
        for terms in docs:
            df.update(terms)
        self.idf = {t: math.log((1 + n) / (1 + c)) + 1.0 for t, c in df.items()}
        self.default_idf = math.log(1 + n) + 1.0 if n else 1.0
        return self

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension)
        for term, tf in Counter(_terms(text)).items():
            vec[stable_bin(term, self.dimension)] += tf * self.idf.get(term, self.default_idf)
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec


class HttpEmbeddingClient:
    """Client for a JSON embedding service: POST {"text": ...} -> {"vector": [...]}.

    The bearer token is read from ``token_env`` at construction; requests are
    capped at ``max_in_flight`` concurrent calls and retried with backoff.
    """

    def __init__(
        self,
        endpoint: str,
        dimension: int,
        token_env: str | None = "PROMPTSHRINK_EMBED_TOKEN",
        max_in_flight: int = 4,
        retries: int = 3,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
        name: str | None = None,
    ):
        self.endpoint = endpoint
        self.dimension = dimension
        self.name = name or f"http:{endpoint}"
        self.retries = retries
        headers = {}
        if token_env:
            token = os.environ.get(token_env)
            if token:
                headers["Authorization"] = f"Bearer {token}"
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)
        self._gate = threading.Semaphore(max_in_flight)

    def embed(self, text: str) -> np.ndarray:
        last: Exception | None = None
        for attempt in range(self.retries):
            try:
                with self._gate:
                    resp = self._client.post(self.endpoint, json={"text": text})
                resp.raise_for_status()
                vec = np.asarray(resp.json()["vector"], dtype=float)
                if vec.shape != (self.dimension,):
                    raise ProviderError(f"expected {self.dimension} components, got {vec.shape}")
                return vec
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last = exc
                time.sleep(min(0.5 * 2**attempt, 8.0) if attempt + 1 < self.retries else 0)
        raise ProviderError(f"embedding request failed after {self.retries} attempts: {last}")

    def close(self) -> None:
        self._client.close()


def calc_importance(tokens: Chunk | Sequence[Token], decay_lambda: float = 0.5) -> float:
    """Mean normalized POS priority with exponential positional decay.

    ``sum_j priority_j * exp(-lambda * j / len) / (4 * len)`` where ``j`` is the
    token offset inside the chunk.
    """
    toks = tokens.tokens if isinstance(tokens, Chunk) else list(tokens)
    n = len(toks)
    if n == 0:
        raise EmptyInputError("cannot score an empty chunk")
    if decay_lambda < 0:
        raise ConfigurationError("decay_lambda must be >= 0")
    total = sum(t.priority * math.exp(-decay_lambda * j / n) for j, t in enumerate(toks))
    return total / (4.0 * n)


def combined_weight(rel: float, imp: float, alpha: float, beta: float) -> float:
    return alpha * rel + beta * imp


BOS = "<s>"
UNK = "<unk>"


class NGramModel:
    """Add-k smoothed n-gram model over case-folded tokens.

    Each sentence is left-padded with ``order - 1`` start symbols. The outcome
    vocabulary is every training type plus ``<unk>``, so an empty corpus gives
    ``V == 1``.
    """

    def __init__(self, order: int = 3, k: float = 1.0):
        if order < 1:
            raise ConfigurationError("order must be >= 1")
        if k <= 0:
            raise ConfigurationError("smoothing constant k must be > 0")
        self.order = order
        self.k = k
        self.counts: Counter[tuple[str, ...]] = Counter()
        self.context_counts: Counter[tuple[str, ...]] = Counter()
        self.vocab: set[str] = {UNK}

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def _padded(self, sent: Sequence[str]) -> list[str]:
        return [BOS] * (self.order - 1) + [w if w in self.vocab else UNK for w in sent]

    def fit(self, sentences: Iterable[Sequence[str]], vocabulary: Iterable[str] | None = None) -> "NGramModel":
        sents = [[w.lower() for w in s] for s in sentences]
        for s in sents:
            self.vocab.update(s)
        if vocabulary is not None:
            self.vocab.update(w.lower() for w in vocabulary)
        for s in sents:
            padded = self._padded(s)
            for i in range(self.order - 1, len(padded)):
                ctx = tuple(padded[i - self.order + 1 : i])
                self.counts[ctx + (padded[i],)] += 1
                self.context_counts[ctx] += 1
        return self

    def prob(self, word: str, context: Sequence[str] = (), k: float | None = None) -> float:
        k = self.k if k is None else k
        w = word.lower()
        w = w if w in self.vocab else UNK
        ctx = tuple(c.lower() if c == BOS or c.lower() in self.vocab else UNK for c in context)
        ctx = ctx[len(ctx) - (self.order - 1) :] if self.order > 1 else ()
        num = self.counts[ctx + (w,)] + k
        den = self.context_counts[ctx] + k * self.vocab_size
        return num / den if den > 0 else 0.0

    def sentence_logprobs(self, sent: Sequence[str]) -> list[float]:
        padded = self._padded([w.lower() for w in sent])
        out = []
        for i in range(self.order - 1, len(padded)):
            ctx = tuple(padded[i - self.order + 1 : i])
            num = self.counts[ctx + (padded[i],)] + self.k
            den = self.context_counts[ctx] + self.k * self.vocab_size
            out.append(math.log(num / den))
        return out

    def perplexity(self, sentences: Iterable[Sequence[str]]) -> float:
        logps = [lp for s in sentences for lp in self.sentence_logprobs(s)]
        if not logps:
            raise EmptyInputError("cannot compute perplexity of empty text")
        return math.exp(-sum(logps) / len(logps))

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": 1,
                "order": self.order,
                "k": self.k,
                "vocab": sorted(self.vocab),
                "counts": [[list(g), c] for g, c in sorted(self.counts.items())],
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, payload: str) -> "NGramModel":
        data = json.loads(payload)
        if data.get("version") != 1:
            raise ValueError(f"unsupported model version {data.get('version')}")
        model = cls(data["order"], data["k"])
        model.vocab = set(data["vocab"])
        for gram, c in data["counts"]:
            model.counts[tuple(gram)] = c
            model.context_counts[tuple(gram[:-1])] += c
        return model


def _sentence_words(obj: Document | Chunk | Sentence | str) -> list[list[str]]:
    if isinstance(obj, str):
        obj = Document.from_text(obj)
    if isinstance(obj, Sentence):
        return [[t.text for t in obj.tokens]]
    return [[t.text for t in s.tokens] for s in obj.sentences if s.tokens]


def train_lm(corpus: Iterable[Document | Chunk | str], order: int = 3, k_s: float = 1.0) -> NGramModel:
    sentences = [s for doc in corpus for s in _sentence_words(doc)]
    return NGramModel(order, k_s).fit(sentences)


def calc_perplexity(chunk: Chunk | Sentence | str, model: NGramModel) -> float:
    sents = _sentence_words(chunk)
    if not any(sents):
        raise EmptyInputError("cannot compute perplexity of an empty chunk")
    return model.perplexity(sents)
