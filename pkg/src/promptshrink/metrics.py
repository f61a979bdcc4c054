"""Text-overlap metrics, compression efficiency and an end-to-end latency harness."""

from __future__ import annotations

import json
import math
import re
import string
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .exceptions import ProviderTimeout
from .providers import LLMProvider
from .scoring import EmbeddingProvider, HashingEmbedder, cosine_sim
from .text import count_tokens, tokenize


def cse(original_tokens: int, compressed_tokens: int, similarity: float) -> float:
    """Compression ratio times semantic similarity; above 1 means a net gain."""
    if compressed_tokens < 1:
        raise ValueError("compressed_tokens must be >= 1")
    if original_tokens < 0:
        raise ValueError("original_tokens must be >= 0")
    return original_tokens / compressed_tokens * similarity


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, references: Sequence[str] | str, max_n: int = 4, smooth: bool = False) -> float:
    """Sentence BLEU with clipped n-gram precisions and a brevity penalty.

    Orders above the candidate length are skipped, so a two-word exact match
    still scores 1. Without ``smooth`` any zero precision gives 0; with it,
    orders above 1 use add-one counts.
    """
    if isinstance(references, str):
        references = [references]
    if not references:
        raise ValueError("at least one reference is required")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cand = tokenize(candidate)
    refs = [tokenize(r) for r in references]
    if not cand:
        return 0.0
    orders = min(max_n, len(cand))
    log_p = 0.0
    for n in range(1, orders + 1):
        counts = _ngrams(cand, n)
        max_ref: Counter = Counter()
        for r in refs:
            max_ref |= _ngrams(r, n)
        clipped = sum(min(c, max_ref[g]) for g, c in counts.items())
        total = sum(counts.values())
        if smooth and n > 1:
            clipped, total = clipped + 1, total + 1
        if clipped == 0:
            return 0.0
        log_p += math.log(clipped / total) / orders
    c = len(cand)
    r = min((abs(len(ref) - c), len(ref)) for ref in refs)[1]
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * math.exp(log_p)


def _lcs(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str) -> float:
    cand = [t.lower() for t in tokenize(candidate)]
    ref = [t.lower() for t in tokenize(reference)]
    lcs = _lcs(cand, ref)
    if lcs == 0:
        return 0.0
    p, r = lcs / len(cand), lcs / len(ref)
    return 2 * p * r / (p + r)


_ARTICLES = re.compile(r"\b(a|an|the)\b")
_PUNCT = set(string.punctuation)


def normalize_answer(text: str) -> str:
    text = "".join(ch for ch in text.lower() if ch not in _PUNCT)
    return " ".join(_ARTICLES.sub(" ", text).split())


def token_f1(prediction: str, gold: str) -> float:
    pred = normalize_answer(prediction).split()
    ref = normalize_answer(gold).split()
    if not pred and not ref:
        return 1.0
    if not pred or not ref:
        return 0.0
    common = sum((Counter(pred) & Counter(ref)).values())
    if common == 0:
        return 0.0
    p, r = common / len(pred), common / len(ref)
    return 2 * p * r / (p + r)


# ---------------------------------------------------------------- evaluation


@dataclass
class EvalRow:
    id: str
    original_tokens: int
    compressed_tokens: int
    similarity: float
    cse: float
    bleu: float
    rouge_l: float
    f1: float


def evaluate_pair(
    id: str, original: str, compressed: str, reference: str | None = None, embedder: EmbeddingProvider | None = None
) -> EvalRow:
    """All metrics for one item. The reference defaults to the original text."""
    embedder = embedder or HashingEmbedder()
    reference = original if reference is None else reference
    n_orig, n_comp = count_tokens(original), count_tokens(compressed)
    sim = cosine_sim(embedder.embed(original), embedder.embed(compressed))
    return EvalRow(
        id=id,
        original_tokens=n_orig,
        compressed_tokens=n_comp,
        similarity=sim,
        cse=cse(n_orig, n_comp, sim) if n_comp else 0.0,
        bleu=bleu(compressed, [reference]),
        rouge_l=rouge_l(compressed, reference),
        f1=token_f1(compressed, reference),
    )


# ------------------------------------------------------------------- latency


@dataclass
class LatencyRow:
    id: str
    original_tokens: int
    compressed_tokens: int
    t_original: float
    t_compress: float
    t_llm_compressed: float

    @property
    def t_compressed(self) -> float:
        return self.t_compress + self.t_llm_compressed


@dataclass
class LatencyReport:
    provider: str
    response_tokens: int
    rows: list[LatencyRow] = field(default_factory=list)
    errata: list[dict] = field(default_factory=list)

    @property
    def mean_original(self) -> float:
        return _mean([r.t_original for r in self.rows])

    @property
    def mean_compressed(self) -> float:
        return _mean([r.t_compressed for r in self.rows])

    @property
    def speedup(self) -> float:
        return speedup_from_timings([r.t_original for r in self.rows], [r.t_compressed for r in self.rows])

    def to_dict(self) -> dict:
        return {
            "provider": self.provider,
            "response_tokens": self.response_tokens,
            "mean_original_s": self.mean_original,
            "mean_compressed_s": self.mean_compressed,
            "speedup": self.speedup,
            "rows": [dict(asdict(r), t_compressed=r.t_compressed) for r in self.rows],
            "errata": self.errata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        head = f"{'id':<12} {'orig_tok':>9} {'comp_tok':>9} {'t_orig':>10} {'t_comp':>10}"
        lines = [f"provider: {self.provider}  response_tokens: {self.response_tokens}", head]
        for r in self.rows:
            lines.append(
                f"{r.id:<12} {r.original_tokens:>9} {r.compressed_tokens:>9} {r.t_original:>10.4f} {r.t_compressed:>10.4f}"
            )
        if self.rows:
            lines.append(f"{'mean':<12} {'':>9} {'':>9} {self.mean_original:>10.4f} {self.mean_compressed:>10.4f}")
            lines.append(f"speedup: {self.speedup:.2f}x")
        for e in self.errata:
            lines.append(f"errata: {e['id']}: {e['error']}")
        return "\n".join(lines)


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs) if xs else math.nan


def speedup_from_timings(original: Sequence[float], compressed: Sequence[float]) -> float:
    """Mean original end-to-end time over mean compressed end-to-end time."""
    if not original or not compressed:
        raise ValueError("timings must be non-empty")
    mc = _mean(compressed)
    if mc <= 0:
        raise ValueError("mean compressed time must be > 0")
    return _mean(original) / mc


def latency_bench(
    pipeline: Callable[[str], str],
    llm: LLMProvider,
    prompts: Iterable[str | tuple[str, str]],
    response_tokens: int = 200,
    clock: Callable[[], float] = time.perf_counter,
) -> LatencyReport:
    """Time ``llm`` on each prompt as-is and after ``pipeline`` compresses it.

    Prompts run one at a time so timings do not overlap. A prompt whose LLM
    call times out is left out of the means and listed under ``errata``.
    """
    report = LatencyReport(getattr(llm, "name", type(llm).__name__), response_tokens)
    for i, item in enumerate(prompts):
        pid, prompt = item if isinstance(item, tuple) else (str(i), item)
        try:
            t0 = clock()
            llm.generate(prompt, max_tokens=response_tokens)
            t1 = clock()
            compressed = pipeline(prompt)
            t2 = clock()
            llm.generate(compressed, max_tokens=response_tokens)
            t3 = clock()
        except ProviderTimeout as exc:
            report.errata.append({"id": pid, "error": str(exc)})
            continue
        report.rows.append(LatencyRow(pid, count_tokens(prompt), count_tokens(compressed), t1 - t0, t2 - t1, t3 - t2))
    return report
