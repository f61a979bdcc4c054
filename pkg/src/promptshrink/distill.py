"""Reward-weighted distillation dataset: candidates, rewards, weights, shards."""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ConfigurationError, EmptyInputError
from .providers import LLMProvider, build_prompt
from .scoring import EmbeddingProvider, HashingEmbedder, cosine_sim
from .segment import split_to_chunks
from .text import Document, count_tokens

DATASET_VERSION = 1


@dataclass(frozen=True)
class RLFTConfig:
    tau_sim: float = 0.85
    beta_kl: float = 1.0
    block_size: int = 3

    def __post_init__(self) -> None:
        if not 0.0 < self.tau_sim <= 1.0:
            raise ConfigurationError(f"tau_sim must be in (0, 1], got {self.tau_sim}")
        if self.beta_kl <= 0:
            raise ConfigurationError(f"beta_kl must be > 0, got {self.beta_kl}")
        if self.block_size < 1:
            raise ConfigurationError("block_size must be >= 1")


@dataclass(frozen=True)
class RLFTSample:
    x: str
    y: str
    c: str
    similarity: float
    ratio: float
    reward: float
    weight: float
    kept: bool
    block: int = 0
    error: str | None = None

    def to_record(self) -> dict:
        rec = {k: getattr(self, k) for k in ("x", "y", "c", "similarity", "ratio", "reward", "weight", "kept")}
        if self.error is not None:
            rec["error"] = self.error
        return rec


def make_blocks(corpus: Iterable[Document | str], block_size: int = 3) -> list[str]:
    """Consecutive non-overlapping sentence windows; a short remainder is kept."""
    blocks: list[str] = []
    for doc in corpus:
        if isinstance(doc, str):
            doc = Document.from_text(doc)
        blocks.extend(c.text for c in split_to_chunks(doc.sentences, block_size) if c.text)
    return blocks


def compression_ratio(x: str, y: str) -> float:
    """``tokens(x) / tokens(y)``, with 0 for an empty candidate."""
    nx = count_tokens(x)
    if nx == 0:
        raise EmptyInputError("source block has no tokens")
    ny = count_tokens(y)
    return nx / ny if ny else 0.0


def reward(x: str, y: str, sim: float, cfg: RLFTConfig) -> float:
    """Compression ratio when the candidate is similar enough, else zero."""
    ratio = compression_ratio(x, y)
    if ratio == 0.0:
        return 0.0
    return ratio if sim >= cfg.tau_sim else 0.0


def rlft_weight(r: float, beta_kl: float) -> float:
    if beta_kl <= 0:
        raise ConfigurationError(f"beta_kl must be > 0, got {beta_kl}")
    return math.exp(r / beta_kl)


def kl_divergence(p: Sequence[float], q: Sequence[float], atol: float = 1e-9) -> float:
    """``sum p_i ln(p_i / q_i)``; ``inf`` when q misses mass that p has."""
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape or pa.ndim != 1:
        raise ValueError("p and q must be 1-d with equal support size")
    for name, arr in (("p", pa), ("q", qa)):
        if np.any(arr < 0) or abs(arr.sum() - 1.0) > atol:
            raise ValueError(f"{name} is not a probability distribution")
    mask = pa > 0
    if np.any(qa[mask] == 0):
        return math.inf
    return max(0.0, float(np.sum(pa[mask] * np.log(pa[mask] / qa[mask]))))


def _make_sample(
    block_id: int,
    x: str,
    provider: LLMProvider,
    cfg: RLFTConfig,
    embedder: EmbeddingProvider,
    compare: str,
    target_llm: LLMProvider | None,
) -> RLFTSample:
    try:
        y = provider.generate(build_prompt(x)).strip()
        if not y:
            sim = 0.0
        elif compare == "output":
            sim = cosine_sim(embedder.embed(target_llm.generate(x)), embedder.embed(target_llm.generate(y)))
        else:
            sim = cosine_sim(embedder.embed(x), embedder.embed(y))
    except Exception as exc:  # provider failures become error samples
        return RLFTSample(x, "", provider.name, 0.0, 0.0, 0.0, 1.0, False, block_id, f"{type(exc).__name__}: {exc}")
    ratio = compression_ratio(x, y)
    r = reward(x, y, sim, cfg)
    kept = bool(y) and sim >= cfg.tau_sim
    return RLFTSample(x, y, provider.name, sim, ratio, r, rlft_weight(r, cfg.beta_kl), kept, block_id)


def build_dataset(
    corpus: Iterable[Document | str],
    providers: Sequence[LLMProvider],
    cfg: RLFTConfig | None = None,
    *,
    embedder: EmbeddingProvider | None = None,
    jobs: int = 1,
    compare: str = "prompt",
    target_llm: LLMProvider | None = None,
) -> tuple[list[RLFTSample], dict]:
    """One candidate per (block, provider), scored and weighted.

    ``compare="prompt"`` measures similarity between the block and the
    candidate directly. ``compare="output"`` instead compares what
    ``target_llm`` produces for each of them.
    """
    cfg = cfg or RLFTConfig()
    if not providers:
        raise ConfigurationError("at least one provider is required")
    names = [p.name for p in providers]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"provider names must be unique: {names}")
    if compare not in ("prompt", "output"):
        raise ConfigurationError(f"compare must be 'prompt' or 'output', got {compare!r}")
    if compare == "output" and target_llm is None:
        raise ConfigurationError("compare='output' needs a target_llm")
    embedder = embedder or HashingEmbedder()
    blocks = make_blocks(corpus, cfg.block_size)
    jobs_list = [(b, x, p) for b, x in enumerate(blocks) for p in sorted(providers, key=lambda p: p.name)]

    def run(job):
        b, x, p = job
        return _make_sample(b, x, p, cfg, embedder, compare, target_llm)

    if jobs > 1 and len(jobs_list) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(run, jobs_list))
    else:
        samples = [run(j) for j in jobs_list]
    samples.sort(key=lambda s: (s.block, s.c))

    per_class: dict[str, Counter] = {n: Counter(total=0, kept=0, errors=0) for n in sorted(names)}
    for s in samples:
        per_class[s.c]["total"] += 1
        per_class[s.c]["kept"] += s.kept
        per_class[s.c]["errors"] += s.error is not None
    manifest = {
        "version": DATASET_VERSION,
        "config": asdict(cfg),
        "compare": compare,
        "embedder": getattr(embedder, "name", type(embedder).__name__),
        "target_llm": getattr(target_llm, "name", None),
        "providers": [{"name": p.name, "version": p.version} for p in sorted(providers, key=lambda p: p.name)],
        "blocks": len(blocks),
        "samples": len(samples),
        "kept": sum(s.kept for s in samples),
        "per_class": {k: dict(v) for k, v in per_class.items()},
    }
    return samples, manifest


def write_shards(samples: Sequence[RLFTSample], manifest: dict, out_dir: str | Path, shard_size: int = 1000) -> list[Path]:
    """JSON-lines shards plus ``manifest.json``; output bytes depend only on inputs."""
    if shard_size < 1:
        raise ConfigurationError("shard_size must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []
    for i in range(0, max(len(samples), 1), shard_size):
        path = out / f"shard-{i // shard_size:05d}.jsonl"
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for s in samples[i : i + shard_size]:
                fh.write(json.dumps(s.to_record(), ensure_ascii=False) + "\n")
        paths.append(path)
    full = dict(manifest, shards=[p.name for p in paths])
    (out / "manifest.json").write_text(json.dumps(full, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths
