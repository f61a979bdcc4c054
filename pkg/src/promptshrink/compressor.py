"""Chunk-level selection to a target retained-token rate."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .exceptions import ConfigurationError, EmptyInputError
from .pos import PosLexicon, RuleSet, token_compress
from .scoring import (
    EmbeddingProvider,
    HashingEmbedder,
    NGramModel,
    calc_importance,
    calc_perplexity,
    combined_weight,
    cosine_sim,
    train_lm,
)
from .segment import split_to_chunks
from .text import (
    Chunk,
    ChunkDecision,
    ChunkScore,
    CompressionConfig,
    CompressionResult,
    Document,
    Sentence,
    count_tokens,
)

Scored = tuple[Chunk, ChunkScore]


def calc_comp_rate(original: Document | str, compressed: str) -> float:
    """Retained-token fraction ``tokens(compressed) / tokens(original)``."""
    text = original.text if isinstance(original, Document) else original
    n = count_tokens(text)
    if n == 0:
        raise EmptyInputError("original text has no tokens")
    return count_tokens(compressed) / n


def sort_chunks(scored: Sequence[Scored]) -> list[Scored]:
    """Weight descending, then perplexity ascending, then chunk id ascending."""
    return sorted(scored, key=lambda cs: (-cs[1].weight, cs[1].ppl, cs[0].id))


def join_top_k(ranked: Sequence[Scored], k: int) -> str:
    """Text of the ``k`` best chunks, emitted in document order."""
    if not 1 <= k <= len(ranked):
        raise ValueError(f"k must be in [1, {len(ranked)}], got {k}")
    chosen = sorted((c for c, _ in ranked[:k]), key=lambda c: c.id)
    return " ".join(c.text for c in chosen if c.text)


def _score_chunks(
    chunks: Sequence[Chunk],
    query: str | None,
    config: CompressionConfig,
    embedder: EmbeddingProvider,
    lm: NGramModel,
    jobs: int,
) -> list[Scored]:
    qvec = embedder.embed(query) if query else None

    def score(chunk: Chunk) -> Scored:
        rel = 1.0 if qvec is None else cosine_sim(embedder.embed(chunk.text), qvec)
        imp = calc_importance(chunk, config.decay_lambda)
        ppl = calc_perplexity(chunk, lm)
        return chunk, ChunkScore(rel, imp, ppl, combined_weight(rel, imp, config.alpha, config.beta))

    return _map(score, chunks, jobs)


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _select(ranked: list[Scored], original_tokens: int, stage1_text: str, target: float) -> tuple[str, float, int]:
    """Decrement k from n until the rate meets ``target``; k stops at 1."""
    k = len(ranked)
    rate = count_tokens(stage1_text) / original_tokens
    if rate <= target:
        return stage1_text, rate, k
    # chunks are joined by single spaces, so token counts add up
    sizes = [count_tokens(c.text) for c, _ in ranked]
    kept = sum(sizes)
    while k > 1 and kept / original_tokens > target:
        k -= 1
        kept -= sizes[k]
    text = join_top_k(ranked, k)
    return text, count_tokens(text) / original_tokens, k


def rank_chunks(
    document: Document,
    query: str | None,
    config: CompressionConfig,
    level: int,
    lexicon: PosLexicon,
    embedder: EmbeddingProvider,
    lm: NGramModel | None = None,
    lm_order: int = 3,
    jobs: int = 1,
) -> tuple[str, list[Scored]]:
    """Stage-1 text and the scored stage-1 chunks in selection order."""
    rules = RuleSet.for_level(level)
    chunks = split_to_chunks(document.sentences, config.chunk_size)
    stage1 = _map(lambda c: token_compress(c, rules, lexicon), chunks, jobs)
    stage1_text = " ".join(c.text for c in stage1 if c.text)
    model = lm if lm is not None else train_lm(stage1, order=lm_order)
    scored = _score_chunks(stage1, query, config, embedder, model, jobs)
    return stage1_text, sort_chunks(scored)


def _truncate_sentences(
    ranked: list[Scored], k: int, original_tokens: int, target: float, decay_lambda: float
) -> tuple[str, float, int]:
    chosen = sorted((c for c, _ in ranked[:k]), key=lambda c: c.id)
    sentences: list[tuple[int, int, Sentence]] = [
        (c.id, j, s) for c in chosen for j, s in enumerate(c.sentences) if s.tokens
    ]

    def render(items) -> str:
        return " ".join(s.text for _, _, s in items)

    removed = 0
    text = render(sentences)
    rate = count_tokens(text) / original_tokens
    order = sorted(
        range(len(sentences)),
        key=lambda i: (calc_importance(sentences[i][2].tokens, decay_lambda), -i),
    )
    drop: set[int] = set()
    for i in order:
        if rate <= target or len(drop) == len(sentences) - 1:
            break
        drop.add(i)
        removed += 1
        text = render([s for j, s in enumerate(sentences) if j not in drop])
        rate = count_tokens(text) / original_tokens
    return text, rate, removed


def compress_to_target(
    document: Document | str,
    query: str | None = None,
    config: CompressionConfig | None = None,
    *,
    lexicon: PosLexicon | None = None,
    embedder: EmbeddingProvider | None = None,
    lm: NGramModel | None = None,
    lm_order: int = 3,
    jobs: int = 1,
) -> CompressionResult:
    """Token-level rule compression followed by chunk selection.

    Rates are always measured against the original document, so both stages
    count toward ``config.target_rate``. When no ``query`` is given every
    chunk gets relevance 1 and chunks are ranked by importance alone. Without
    an explicit ``lm`` the perplexity model is trained on the stage-1 text.
    """
    config = config or CompressionConfig()
    if config.target_rate <= 0:
        raise ConfigurationError("target_rate must be > 0")
    if isinstance(document, str):
        document = Document.from_text(document)
    if not document.sentences:
        raise EmptyInputError("document has no sentences")
    original_tokens = count_tokens(document.text)
    if original_tokens == 0:
        raise EmptyInputError("document has no tokens")
    lexicon = lexicon or PosLexicon.default()
    embedder = embedder or HashingEmbedder()

    level = config.level
    stage1_text, ranked = rank_chunks(document, query, config, level, lexicon, embedder, lm, lm_order, jobs)
    initial_rate = count_tokens(stage1_text) / original_tokens
    text, rate, k = _select(ranked, original_tokens, stage1_text, config.target_rate)
    notes: list[str] = []

    if rate > config.target_rate and config.mode == "performance":
        if level < 5:
            level = 5
            stage1_text, ranked = rank_chunks(document, query, config, level, lexicon, embedder, lm, lm_order, jobs)
            text, rate, k = _select(ranked, original_tokens, stage1_text, config.target_rate)
            notes.append("performance: stage 1 re-run at level 5")
        if rate > config.target_rate:
            text, rate, removed = _truncate_sentences(
                ranked, k, original_tokens, config.target_rate, config.decay_lambda
            )
            notes.append(f"performance: dropped {removed} lowest-importance sentence(s)")

    retained = {c.id for c, _ in ranked[:k]}
    decisions = tuple(
        ChunkDecision(c.id, s, c.id in retained) for c, s in sorted(ranked, key=lambda cs: cs[0].id)
    )
    return CompressionResult(
        text=text,
        initial_rate=initial_rate,
        achieved_rate=rate,
        retained_k=k,
        total_chunks=len(ranked),
        best_effort=rate > config.target_rate,
        per_chunk=decisions,
        original_tokens=original_tokens,
        compressed_tokens=count_tokens(text),
        target_rate=config.target_rate,
        mode=config.mode,
        level=level,
        notes=tuple(notes),
    )
