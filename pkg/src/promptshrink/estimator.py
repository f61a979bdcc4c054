from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .compressor import compress_to_target
from .exceptions import ConfigurationError
from .pos import PosLexicon
from .scoring import HashingEmbedder, train_lm
from .text import CompressionConfig, CompressionResult


def check_texts(X) -> list[str]:
    """Validate a 1-d collection of strings (a bare string is rejected)."""
    if isinstance(X, (str, bytes)):
        raise TypeError("expected an iterable of strings, got a single string")
    texts = list(X)
    for i, x in enumerate(texts):
        if not isinstance(x, str):
            raise TypeError(f"element {i} is {type(x).__name__}, expected str")
    return texts


class PromptShrinker(TransformerMixin, BaseEstimator):
    """Prompt compressor with the scikit-learn transformer interface.

    ``fit`` registers the corpus: term IDF for the default embedder and, when
    ``lm_source="corpus"``, the n-gram model used for chunk perplexity.
    ``transform`` maps each text to its compressed form; use :meth:`compress`
    for the full :class:`CompressionResult` trace.

    Examples
    --------
    >>> shrinker = PromptShrinker(target_rate=0.5, level=3).fit(docs)   # doctest: +SKIP
    >>> shrinker.transform(docs)                                        # doctest: +SKIP
    """

    def __init__(
        self,
        target_rate: float = 0.5,
        level: int = 3,
        alpha: float = 0.5,
        beta: float = 0.5,
        mode: str = "standard",
        chunk_size: int = 3,
        decay_lambda: float = 0.5,
        lm_order: int = 3,
        lm_k: float = 1.0,
        lm_source: str = "self",
        query: str | None = None,
        embedder=None,
        lexicon: PosLexicon | None = None,
        n_jobs: int = 1,
    ):
        self.target_rate = target_rate
        self.level = level
        self.alpha = alpha
        self.beta = beta
        self.mode = mode
        self.chunk_size = chunk_size
        self.decay_lambda = decay_lambda
        self.lm_order = lm_order
        self.lm_k = lm_k
        self.lm_source = lm_source
        self.query = query
        self.embedder = embedder
        self.lexicon = lexicon
        self.n_jobs = n_jobs

    def fit(self, X: Iterable[str], y=None) -> "PromptShrinker":
        texts = check_texts(X)
        if self.lm_source not in ("self", "corpus"):
            raise ConfigurationError(f"lm_source must be 'self' or 'corpus', got {self.lm_source!r}")
        self.config_ = CompressionConfig(
            alpha=self.alpha,
            beta=self.beta,
            target_rate=self.target_rate,
            level=self.level,
            mode=self.mode,
            chunk_size=self.chunk_size,
            decay_lambda=self.decay_lambda,
        )
        self.embedder_ = self.embedder if self.embedder is not None else HashingEmbedder().fit(texts)
        self.lm_ = train_lm(texts, order=self.lm_order, k_s=self.lm_k) if self.lm_source == "corpus" else None
        self.lexicon_ = self.lexicon or PosLexicon.default()
        return self

    def compress(self, text: str, query: str | None = None) -> CompressionResult:
        check_is_fitted(self, "config_")
        return compress_to_target(
            text,
            query if query is not None else self.query,
            self.config_,
            lexicon=self.lexicon_,
            embedder=self.embedder_,
            lm=self.lm_,
            lm_order=self.lm_order,
            jobs=self.n_jobs,
        )

    def transform(self, X: Iterable[str], queries: Iterable[str | None] | None = None) -> list[str]:
        texts = check_texts(X)
        qs = list(queries) if queries is not None else [None] * len(texts)
        if len(qs) != len(texts):
            raise ValueError("queries must match X in length")
        return [self.compress(t, q).text for t, q in zip(texts, qs)]
