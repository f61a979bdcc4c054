"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import itertools
import math
import random
import time

import numpy as np
import pytest

from corpus import fuzz_corpus, random_document, random_vocab
from promptshrink.compressor import _select, compress_to_target, join_top_k, rank_chunks, sort_chunks
from promptshrink.distill import RLFTConfig, build_dataset, kl_divergence, reward, rlft_weight, write_shards
from promptshrink.metrics import bleu, cse, latency_bench, rouge_l, speedup_from_timings, token_f1
from promptshrink.pos import PosLexicon, equivalent_modulo_inflection, extract_relations, pos_tag, simplify
from promptshrink.providers import (
    AdverbDropProvider,
    EchoProvider,
    LinearLatencyProvider,
    NoiseProvider,
    RuleProvider,
    SimulatedClock,
)
from promptshrink.scoring import HashingEmbedder
from promptshrink.segment import split_sentences
from promptshrink.text import Chunk, ChunkScore, CompressionConfig, Document, Sentence, count_tokens

LEX = PosLexicon.default()
RATES = (0.5, 0.33, 0.2, 0.125)


# 1 ------------------------------------------------------------------------


def test_criterion_1_rate_targeting(acceptance):
    rng = random.Random(2024)
    docs = [Document.from_text(random_document(rng, 30, 100)) for _ in range(100)]
    results = {}
    t0 = time.perf_counter()
    for i, doc in enumerate(docs):
        for rate in RATES:
            results[i, rate] = compress_to_target(doc, None, CompressionConfig(target_rate=rate), lexicon=LEX)
    elapsed = time.perf_counter() - t0

    problems = []
    embedder = HashingEmbedder()
    for i, doc in enumerate(docs):
        stage1, ranked = rank_chunks(doc, None, CompressionConfig(), 3, LEX, embedder)
        n_orig = count_tokens(doc.text)
        sizes = [count_tokens(join_top_k(ranked, k)) for k in range(1, len(ranked) + 1)]
        for rate in RATES:
            res = results[i, rate]
            if not (res.achieved_rate <= rate or res.best_effort):
                problems.append((i, rate, "rate"))
            if count_tokens(stage1) / n_orig <= rate:
                expected_k = len(ranked)
            else:
                feasible = [k for k, s in enumerate(sizes, 1) if s / n_orig <= rate]
                expected_k = max(feasible) if feasible else 1
            if res.retained_k != expected_k:
                problems.append((i, rate, "k", res.retained_k, expected_k))
    ok = not problems and elapsed < 10.0
    acceptance(1, "rate targeting", ok, f"400 runs in {elapsed:.2f}s, {len(problems)} violations")
    assert not problems, problems[:5]
    assert elapsed < 10.0


# 2 ------------------------------------------------------------------------


def _brute_force_top(keys, k):
    """The unique k-subset whose every member sorts before every non-member."""
    ids = range(len(keys))
    hits = [set(s) for s in itertools.combinations(ids, k) if all(keys[a] < keys[b] for a in s for b in ids if b not in s)]
    assert len(hits) == 1
    return hits[0]


def test_criterion_2_selection_oracle(acceptance):
    rng = random.Random(99)
    vocab = random_vocab(rng, 120)
    checked = mismatches = 0
    while checked < 500:
        doc = random_document(rng, 3, 30, vocab)
        query = " ".join(rng.sample(vocab, 5))
        cfg = CompressionConfig(target_rate=rng.choice([0.15, 0.3, 0.5, 0.7]), level=1)
        res = compress_to_target(doc, query, cfg, lexicon=LEX)
        weights = [d.score.weight for d in res.per_chunk]
        if len(set(weights)) < len(weights) or len(weights) > 10:
            continue
        checked += 1
        retained = {d.id for d in res.per_chunk if d.retained}
        mismatches += retained != _brute_force_top([-w for w in weights], res.retained_k)

    # tied weights: order falls back to perplexity, then id
    tie_mismatches = 0
    for _ in range(500):
        n = rng.randint(1, 10)
        specs = [(rng.choice([0.2, 0.5, 0.8]), rng.choice([1.0, 2.0, 3.0]), rng.randint(1, 6)) for _ in range(n)]
        scored = [
            (Chunk(i, tuple(split_sentences(" ".join(["w"] * m) + "."))), ChunkScore(1.0, 0.0, p, w))
            for i, (w, p, m) in enumerate(specs)
        ]
        ranked = sort_chunks(scored)
        total = sum(m + 1 for _, _, m in specs)
        stage1 = " ".join(c.text for c, _ in scored)
        _, _, k = _select(ranked, total, stage1, rng.choice([0.2, 0.5, 0.9]))
        keys = [(-w, p, i) for i, (w, p, _) in enumerate(specs)]
        tie_mismatches += {c.id for c, _ in ranked[:k]} != _brute_force_top(keys, k)

    ok = mismatches == 0 and tie_mismatches == 0
    acceptance(2, "selection oracle", ok, f"500 distinct-weight + 500 tied instances, {mismatches + tie_mismatches} mismatches")
    assert ok


# 3 ------------------------------------------------------------------------

ORIGINAL = (
    "The economy, despite facing numerous challenges from external factors such as "
    "global market fluctuations and geopolitical tensions, continues to grow."
)
REFERENCE = {
    1: "The economy, despite facing numerous challenges, continues to grow.",
    2: "The economy, despite challenges, continues to grow.",
    3: "The economy grows despite external challenges.",
    4: "The economy grows despite challenges.",
}


def _tagged(text):
    (s,) = split_sentences(text)
    s = pos_tag(s, LEX)
    return Sentence(s.tokens, tuple(extract_relations(s, LEX)))


def _subseq(small, big):
    it = iter(big)
    return all(any(x == y for y in it) for x in small)


def test_criterion_3_rule_suite(acceptance):
    src = _tagged(ORIGINAL)
    outputs = {level: simplify(src, level, LEX) for level in range(1, 6)}
    level_ok = {level: equivalent_modulo_inflection(outputs[level].text, REFERENCE[level]) for level in range(1, 5)}
    level_ok[5] = {t.text for t in outputs[5].tokens} == {"The", "economy", "grow", "."}

    violations = []
    for text in fuzz_corpus(200, seed=7):
        s = _tagged(text)
        words = [t.text for t in s.tokens]
        prev = len(words)
        for level in range(1, 6):
            out = simplify(s, level, LEX)
            ow = [t.text for t in out.tokens]
            if not _subseq(ow, words):
                violations.append((text, level, "subsequence"))
            if len(ow) > prev:
                violations.append((text, level, "monotonicity"))
            if simplify(out, level, LEX).tokens != out.tokens:
                violations.append((text, level, "idempotence"))
            prev = len(ow)

    failed_levels = [f"L{k}: {outputs[k].text!r}" for k, ok in level_ok.items() if not ok]
    ok = all(level_ok.values()) and not violations
    detail = f"levels ok {sorted(k for k, v in level_ok.items() if v)}, {len(violations)} invariant violations"
    if failed_levels:
        detail += "; mismatched " + ", ".join(failed_levels)
    acceptance(3, "rule suite", ok, detail)
    assert not violations, violations[:5]
    assert all(level_ok.values()), failed_levels


# 4 ------------------------------------------------------------------------


def _nonce_words(rng, n, pool):
    return [rng.choice(pool) for _ in range(n)]


def _sentence(words):
    return " ".join([words[0].capitalize()] + words[1:]) + "."


def test_criterion_4_budget_arithmetic(acceptance):
    rng = random.Random(5)
    # words ending in "x" avoid every suffix rule, so level 1 leaves sentences untouched
    topic = [f"{w}x" for w in ("budget", "merger", "tariff", "quota", "ledger")]
    other = [f"{w}x" for w in random_vocab(rng, 200)]
    relevant = [_sentence(_nonce_words(rng, 496, topic)) for _ in range(4)]  # 4 x 497 = 1988 tokens
    filler_lengths = [520] * 15 + [507]  # 8307 tokens
    filler = [_sentence(_nonce_words(rng, m - 1, other)) for m in filler_lengths]
    sentences = filler[:]
    for s in relevant:
        sentences.insert(rng.randint(0, len(sentences)), s)
    doc = Document.from_text(" ".join(sentences))
    original = count_tokens(doc.text)

    cfg = CompressionConfig(target_rate=1988 / 10295, level=1, chunk_size=1)
    res = compress_to_target(doc, " ".join(topic), cfg, lexicon=LEX)
    ok = (
        original == 10295
        and res.compressed_tokens == 1988
        and abs(res.achieved_rate - 0.1931) <= 0.0005
        and res.ratio_label == "5x"
        and res.to_dict()["ratio_label"] == "5x"
    )
    acceptance(4, "budget arithmetic", ok, f"{original} -> {res.compressed_tokens} tokens, rate {res.achieved_rate:.4f}, label {res.ratio_label}")
    assert original == 10295
    assert res.compressed_tokens == 1988
    assert res.achieved_rate == pytest.approx(0.1931, abs=0.0005)
    assert res.ratio_label == "5x"


# 5 ------------------------------------------------------------------------


def test_criterion_5_rlft_math(acceptance):
    weight_errors = [
        (r, b)
        for b in (0.1, 0.5, 1.0, 2.0)
        for r in np.linspace(0.0, 10.0, 201)
        if not math.isclose(rlft_weight(float(r), b), math.exp(r / b), rel_tol=1e-9, abs_tol=1e-9)
    ]
    rng = np.random.default_rng(0)
    kl_errors = 0
    for _ in range(10_000):
        size = int(rng.integers(2, 10))
        p, q = rng.dirichlet(np.ones(size)), rng.dirichlet(np.ones(size))
        p, q = p / p.sum(), q / q.sum()
        kl_errors += kl_divergence(p, q) < -1e-9
        kl_errors += abs(kl_divergence(p, p)) > 1e-9
    cfg = RLFTConfig(tau_sim=0.85)
    x, y = " ".join(["w"] * 100), " ".join(["w"] * 20)
    reward_ok = (
        reward(x, y, 0.90, cfg) == 5.0
        and reward(x, y, 0.85, cfg) == 5.0
        and reward(x, y, 0.8499, cfg) == 0.0
        and reward(x, y, 0.50, cfg) == 0.0
        and reward(x, x, 1.0, cfg) == 1.0
    )
    ok = not weight_errors and kl_errors == 0 and reward_ok
    acceptance(5, "RLFT math", ok, f"{len(weight_errors)} weight errors, {kl_errors} KL errors, reward rule {'ok' if reward_ok else 'broken'}")
    assert ok


# 6 ------------------------------------------------------------------------


def test_criterion_6_metric_anchors(acceptance):
    checks = {
        "bleu example": abs(bleu("the cat sat", ["the cat sat here"]) - 0.7165) <= 1e-4,
        "rouge_l example": rouge_l("a b c d", "a c d b") == 0.75,
        "f1 example": token_f1("apple banana", "banana cherry") == 0.5,
        "cse identity": cse(250, 250, 1.0) == 1.0,
        "cse back-solve": abs(cse(343.65, 253.15, 0.7707) - 1.0462) <= 1e-3,
    }
    same, a, b = "the market rose today", "the market rose", "dogs chase cats"
    for name, fn in (("bleu", lambda c, r: bleu(c, [r])), ("rouge_l", rouge_l), ("f1", token_f1)):
        checks[f"{name} identity"] = fn(same, same) == 1.0
        checks[f"{name} disjoint"] = fn(a, b) == 0.0
    checks["cse disjoint"] = cse(100, 20, 0.0) == 0.0
    failed = [k for k, v in checks.items() if not v]
    acceptance(6, "metric anchors", not failed, f"{len(checks) - len(failed)}/{len(checks)} checks" + (f", failed {failed}" if failed else ""))
    assert not failed


# 7 ------------------------------------------------------------------------


def test_criterion_7_latency(acceptance):
    rng = random.Random(3)
    pool = [f"{w}x" for w in random_vocab(rng, 50)]
    prompts = []
    for n in (5, 10, 20):
        sents = [_sentence(_nonce_words(rng, 19, pool)) for _ in range(n)]  # 20 tokens each
        prompts.append(" ".join(sents))
    cfg = CompressionConfig(target_rate=0.2, level=1, chunk_size=1)
    clock = SimulatedClock()  # compression costs nothing on this clock
    llm = LinearLatencyProvider(clock, b=0.002)
    report = latency_bench(lambda t: compress_to_target(t, None, cfg, lexicon=LEX).text, llm, prompts, clock=clock)
    canned = speedup_from_timings([11.84], [6.64])
    ok = abs(report.speedup - 5.0) <= 0.01 and abs(canned - 1.78) <= 0.005
    acceptance(7, "latency harness", ok, f"mock speedup {report.speedup:.3f}, canned {canned:.3f}")
    assert report.speedup == pytest.approx(5.0, abs=0.01)
    assert canned == pytest.approx(1.78, abs=0.005)


# 8 ------------------------------------------------------------------------


def test_criterion_8_distillation_determinism(acceptance, tmp_path):
    corpus = [" ".join(fuzz_corpus(60, seed=s)) for s in range(10)]  # 10 x 20 = 200 blocks
    providers = [EchoProvider(), NoiseProvider(), AdverbDropProvider(), RuleProvider(3), RuleProvider(5)]
    dirs = []
    for run in ("run1", "run2"):
        samples, manifest = build_dataset(corpus, providers, RLFTConfig(tau_sim=0.85), jobs=4 if run == "run2" else 1)
        write_shards(samples, manifest, tmp_path / run, shard_size=250)
        dirs.append(tmp_path / run)
    names = sorted(p.name for p in dirs[0].iterdir())
    identical = names == sorted(p.name for p in dirs[1].iterdir()) and all(
        (dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names
    )
    kept = [build_dataset(corpus, providers, RLFTConfig(tau_sim=t))[1]["kept"] for t in (0.7, 0.8, 0.9)]
    monotone = kept == sorted(kept, reverse=True)
    ok = manifest["blocks"] == 200 and identical and monotone
    acceptance(8, "distillation determinism", ok, f"{manifest['blocks']} blocks, {len(names)} files identical={identical}, kept@0.7/0.8/0.9={kept}")
    assert manifest["blocks"] == 200
    assert identical
    assert monotone
