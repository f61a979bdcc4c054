"""Rule-based prompt compression with chunk-level budget selection."""

from .compressor import calc_comp_rate, compress_to_target, join_top_k, sort_chunks
from .distill import RLFTConfig, RLFTSample, build_dataset, kl_divergence, make_blocks, reward, rlft_weight, write_shards
from .estimator import PromptShrinker
from .exceptions import ConfigurationError, EmptyInputError, ProviderError, ProviderTimeout
from .metrics import bleu, cse, latency_bench, rouge_l, speedup_from_timings, token_f1
from .pos import PosLexicon, RuleSet, equivalent_modulo_inflection, extract_relations, pos_tag, simplify, token_compress
from .scoring import HashingEmbedder, NGramModel, calc_importance, calc_perplexity, cosine_sim, train_lm
from .segment import split_sentences, split_to_chunks
from .text import (
    Chunk,
    CompressionConfig,
    CompressionResult,
    Document,
    Sentence,
    Token,
    count_tokens,
    ratio_label,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Chunk",
    "CompressionConfig",
    "CompressionResult",
    "ConfigurationError",
    "Document",
    "EmptyInputError",
    "HashingEmbedder",
    "NGramModel",
    "PosLexicon",
    "PromptShrinker",
    "ProviderError",
    "ProviderTimeout",
    "RLFTConfig",
    "RLFTSample",
    "RuleSet",
    "Sentence",
    "Token",
    "bleu",
    "build_dataset",
    "calc_comp_rate",
    "calc_importance",
    "calc_perplexity",
    "compress_to_target",
    "cosine_sim",
    "count_tokens",
    "cse",
    "equivalent_modulo_inflection",
    "extract_relations",
    "join_top_k",
    "kl_divergence",
    "latency_bench",
    "make_blocks",
    "pos_tag",
    "ratio_label",
    "reward",
    "rlft_weight",
    "rouge_l",
    "simplify",
    "sort_chunks",
    "speedup_from_timings",
    "split_sentences",
    "split_to_chunks",
    "token_compress",
    "token_f1",
    "tokenize",
    "train_lm",
    "write_shards",
]
