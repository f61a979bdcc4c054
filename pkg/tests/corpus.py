"""Seeded generators for synthetic sentences and documents used across tests."""

from __future__ import annotations

import random

SUBJECTS = ["The economy", "A small company", "Shareholders", "The board", "Bob Dudley", "The new policy",
            "Many investors", "The old market", "Our team", "Chief Executive Ann Lee", "It", "They"]
VERBS = ["grows", "continues to grow", "rejected the deal", "voted against the plan", "cut jobs",
         "raised prices", "left", "seems happy", "keeps falling", "did not approve the bonus",
         "faces opposition", "reported a loss"]
MODS = ["very", "quickly", "really", "numerous", "global", "external", "recently", "strongly"]
PARENS = ["despite facing numerous challenges", "which was founded in 1990", "the largest firm",
          "though nonbinding", "according to Eikon data", "after the vote was announced",
          "including BP and Shell", "such as rising costs and weak demand"]
TAILS = ["because it rained", "but the board refused", "so prices fell", "if the vote passes",
         "than ever before", "while costs rose", "and the shares dropped", "when the market opened",
         "such as global market fluctuations and geopolitical tensions", "in London on Thursday"]
OPENERS = ["However,", "Moreover,", "When the meeting ended,", "Although profits fell,", "Please", ""]


def random_sentence(rng: random.Random) -> str:
    parts = []
    opener = rng.choice(OPENERS)
    if opener and rng.random() < 0.4:
        parts.append(opener)
    subj = rng.choice(SUBJECTS)
    if parts and parts[0] not in ("Please",):
        subj = subj[0].lower() + subj[1:] if subj.split()[0] in ("The", "A", "Many", "Our") else subj
    if rng.random() < 0.35:
        subj = f"{subj}, {rng.choice(PARENS)},"
    parts.append(subj)
    verb = rng.choice(VERBS)
    if rng.random() < 0.4:
        verb = f"{rng.choice(MODS)} {verb}"
    parts.append(verb)
    if rng.random() < 0.5:
        tail = rng.choice(TAILS)
        if rng.random() < 0.4:
            parts[-1] += ","
        parts.append(tail)
    end = rng.choice([".", ".", ".", "!", "?"])
    text = " ".join(parts).replace(",,", ",") + end
    return text[0].upper() + text[1:]


def random_word_sentence(rng: random.Random, vocab: list[str], lo: int = 4, hi: int = 20) -> str:
    n = rng.randint(lo, hi)
    words = [rng.choice(vocab) for _ in range(n)]
    return " ".join(words).capitalize() + "."


def random_vocab(rng: random.Random, size: int = 300) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return ["".join(rng.choice(letters) for _ in range(rng.randint(3, 9))) for _ in range(size)]


def random_document(rng: random.Random, lo: int = 30, hi: int = 100, vocab: list[str] | None = None) -> str:
    vocab = vocab or random_vocab(rng)
    return " ".join(random_word_sentence(rng, vocab) for _ in range(rng.randint(lo, hi)))


def fuzz_corpus(n: int = 200, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    return [random_sentence(rng) for _ in range(n)]
