"""Layered text model: tokens, sentences, chunks, documents and run config.

Every type here is a frozen dataclass so one instance can be shared by
several compression stages (and threads) without copying.
"""

from __future__ import annotations

import json
import math
import unicodedata
from functools import lru_cache
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .exceptions import ConfigurationError

POS_TAGS = (
    "noun",
    "verb",
    "adjective",
    "adverb",
    "pronoun",
    "preposition",
    "conjunction",
    "determiner",
    "numeral",
    "punctuation",
    "other",
)

RELATION_KINDS = (
    "Contrast",
    "Concessive",
    "Causal",
    "Result",
    "Conditional",
    "Progressive",
    "Comparative",
    "Coordinate",
)

_PRIORITY = {"noun": 4, "verb": 3, "adjective": 2, "adverb": 1}


def priority_of(pos: str) -> int:
    """Retention priority of a POS tag: noun 4, verb 3, adjective 2, adverb 1, else 0."""
    return _PRIORITY.get(pos, 0)


@lru_cache(maxsize=4096)
def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def is_punctuation(text: str) -> bool:
    return bool(text) and all(_is_punct_char(ch) for ch in text)


def _group_runs(s: str) -> list[str]:
    """Split a run of punctuation into groups of identical characters."""
    out: list[str] = []
    for ch in s:
        if out and out[-1][-1] == ch:
            out[-1] += ch
        else:
            out.append(ch)
    return out


def tokenize_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokenize ``text`` into ``(token, start, end)`` triples.

    Whitespace separates words; leading and trailing punctuation is split off
    each word (one token per run of identical characters) while internal
    hyphens, apostrophes and periods stay inside the word.
    """
    spans: list[tuple[str, int, int]] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        word = text[i:j]
        if word.isalnum():
            spans.append((word, i, j))
            i = j
            continue
        lead = 0
        while lead < len(word) and _is_punct_char(word[lead]):
            lead += 1
        if lead == len(word):
            pos = i
            for g in _group_runs(word):
                spans.append((g, pos, pos + len(g)))
                pos += len(g)
            i = j
            continue
        trail = len(word)
        while trail > lead and _is_punct_char(word[trail - 1]):
            trail -= 1
        pos = i
        for g in _group_runs(word[:lead]):
            spans.append((g, pos, pos + len(g)))
            pos += len(g)
        spans.append((word[lead:trail], i + lead, i + trail))
        pos = i + trail
        for g in _group_runs(word[trail:]):
            spans.append((g, pos, pos + len(g)))
            pos += len(g)
        i = j
    return spans


def tokenize(text: str) -> list[str]:
    return [t for t, _, _ in tokenize_spans(text)]


# Optional hook for an external tokenizer (e.g. a BPE encoder's ``len(encode(x))``).
_token_counter: Callable[[str], int] | None = None


def set_token_counter(counter: Callable[[str], int] | None) -> None:
    """Install (or with ``None`` remove) an external token-count adapter."""
    global _token_counter
    _token_counter = counter


def count_tokens(text: str) -> int:
    if _token_counter is not None:
        return int(_token_counter(text))
    n = 0
    for word in text.split():
        n += 1 if word.isalnum() else _word_token_count(word)
    return n


def _word_token_count(word: str) -> int:
    return len(tokenize_spans(word))


@dataclass(frozen=True)
class Token:
    text: str
    index: int
    pos: str = "other"
    space_before: bool = True
    proper: bool = False

    @property
    def priority(self) -> int:
        return priority_of(self.pos)

    @property
    def is_punct(self) -> bool:
        return self.pos == "punctuation"


@dataclass(frozen=True)
class RelationAnnotation:
    kind: str
    trigger_token: int
    retained_side: str
    trigger: str = ""

    def __post_init__(self) -> None:
        if self.kind not in RELATION_KINDS:
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if self.retained_side not in ("before", "after", "both"):
            raise ValueError(f"bad retained_side {self.retained_side!r}")


_CLOSERS = set(".,!?;:)]}%…»”’")


def render_tokens(tokens: Sequence[Token]) -> str:
    """Join tokens back into text, restoring original spacing where adjacent."""
    parts: list[str] = []
    prev: Token | None = None
    for tok in tokens:
        if prev is None:
            parts.append(tok.text)
        else:
            if tok.index == prev.index + 1:
                glue = not tok.space_before
            else:
                glue = tok.is_punct and tok.text[0] in _CLOSERS
            parts.append(tok.text if glue else " " + tok.text)
        prev = tok
    return "".join(parts)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    relations: tuple[RelationAnnotation, ...] = ()

    @property
    def text(self) -> str:
        return render_tokens(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def with_tokens(self, tokens: Iterable[Token]) -> "Sentence":
        return replace(self, tokens=tuple(tokens))


@dataclass(frozen=True)
class Chunk:
    id: int
    sentences: tuple[Sentence, ...]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens]

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences if s.tokens)


@dataclass(frozen=True)
class Document:
    sentences: tuple[Sentence, ...]

    @classmethod
    def from_text(cls, text: str, abbreviations: Iterable[str] | None = None) -> "Document":
        from .segment import split_sentences

        return cls(tuple(split_sentences(text, abbreviations=abbreviations)))

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences if s.tokens)

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def to_dict(self) -> dict:
        return {"version": 1, "sentences": [asdict(s) for s in self.sentences]}

    @classmethod
    def from_dict(cls, data: dict) -> "Document":
        sentences = []
        for s in data["sentences"]:
            toks = tuple(Token(**t) for t in s["tokens"])
            rels = tuple(RelationAnnotation(**r) for r in s.get("relations", ()))
            sentences.append(Sentence(toks, rels))
        return cls(tuple(sentences))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Document":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class CompressionConfig:
    """Knobs for one compression run.

    ``alpha`` and ``beta`` are rescaled to sum to one on construction.
    ``target_rate`` is the retained-token fraction, so 0.2 means "5x".
    """

    alpha: float = 0.5
    beta: float = 0.5
    target_rate: float = 0.5
    level: int = 3
    mode: str = "standard"
    chunk_size: int = 3
    decay_lambda: float = 0.5

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {v}")
        total = self.alpha + self.beta
        if total <= 0:
            raise ConfigurationError("alpha + beta must be positive")
        if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=1e-12):
            object.__setattr__(self, "alpha", self.alpha / total)
            object.__setattr__(self, "beta", self.beta / total)
        if not 0.0 < self.target_rate <= 1.0:
            raise ConfigurationError(f"target_rate must lie in (0, 1], got {self.target_rate}")
        if self.level not in (1, 2, 3, 4, 5):
            raise ConfigurationError(f"level must be 1..5, got {self.level}")
        if self.mode not in ("standard", "performance"):
            raise ConfigurationError(f"mode must be 'standard' or 'performance', got {self.mode!r}")
        if int(self.chunk_size) != self.chunk_size or self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be an integer >= 1, got {self.chunk_size}")
        if self.decay_lambda < 0:
            raise ConfigurationError(f"decay_lambda must be >= 0, got {self.decay_lambda}")


@dataclass(frozen=True)
class ChunkScore:
    rel: float
    imp: float
    ppl: float
    weight: float


@dataclass(frozen=True)
class ChunkDecision:
    id: int
    score: ChunkScore
    retained: bool


def ratio_label(rate: float) -> str:
    """Human label for a retained-token fraction: 0.1931 -> "5x"."""
    if rate <= 0:
        return "inf"
    return f"{round(1.0 / rate)}x"


@dataclass(frozen=True)
class CompressionResult:
    text: str
    initial_rate: float
    achieved_rate: float
    retained_k: int
    total_chunks: int
    best_effort: bool
    per_chunk: tuple[ChunkDecision, ...] = ()
    original_tokens: int = 0
    compressed_tokens: int = 0
    target_rate: float = 1.0
    mode: str = "standard"
    level: int = 3
    notes: tuple[str, ...] = field(default=())

    @property
    def ratio_label(self) -> str:
        return ratio_label(self.achieved_rate)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_chunk"] = [
            {"id": c.id, "retained": c.retained, **asdict(c.score)} for c in self.per_chunk
        ]
        d["notes"] = list(self.notes)
        d["ratio_label"] = self.ratio_label
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)
