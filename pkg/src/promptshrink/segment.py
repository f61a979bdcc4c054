"""Sentence splitting and grouping of sentences into fixed-size chunks."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .exceptions import ConfigurationError
from .text import Chunk, Sentence, Token, is_punctuation, tokenize_spans

DEFAULT_ABBREVIATIONS = frozenset(
    ["dr.", "mr.", "mrs.", "ms.", "st.", "e.g.", "i.e.", "etc.", "vs.", "fig.", "eq."]
)

_PARAGRAPH_BREAK = re.compile(r"\n[^\S\n]*\n")
_CLOSING_QUOTES = set("\"'”’)]»")


def _is_terminator(tok: str) -> bool:
    return bool(tok) and all(ch in ".!?…" for ch in tok)


def split_sentences(
    text: str,
    abbreviations: Iterable[str] | None = None,
    start_index: int = 0,
) -> list[Sentence]:
    """Split ``text`` into sentences of untagged tokens.

    A run of ``.``, ``!`` or ``?`` ends a sentence when it is followed by
    whitespace and an upper-case token (or the end of the text). Closing
    quotes glued to the terminator stay with the sentence. A period after a
    known abbreviation never ends a sentence. Blank lines always do.
    """
    abbrevs = {a.lower() for a in (abbreviations or DEFAULT_ABBREVIATIONS)}
    spans = tokenize_spans(text)
    if not spans:
        return []

    tokens: list[Token] = []
    for k, (tok, start, _end) in enumerate(spans):
        space_before = k == 0 or start > spans[k - 1][2]
        pos = "punctuation" if is_punctuation(tok) else "other"
        tokens.append(Token(tok, start_index + k, pos, space_before))

    boundaries: list[int] = []  # exclusive end positions
    n = len(spans)
    k = 0
    while k < n:
        tok = spans[k][0]
        if k + 1 < n and _PARAGRAPH_BREAK.search(text, spans[k][2], spans[k + 1][1]):
            boundaries.append(k + 1)
            k += 1
            continue
        if not _is_terminator(tok):
            k += 1
            continue
        if tok == "." and k > 0 and spans[k - 1][2] == spans[k][1]:
            if (spans[k - 1][0] + ".").lower() in abbrevs:
                k += 1
                continue
        end = k + 1
        while end < n and spans[end][0][0] in _CLOSING_QUOTES and spans[end][1] == spans[end - 1][2]:
            end += 1
        if end >= n:
            boundaries.append(n)
            break
        nxt_text, nxt_start, _ = spans[end]
        gap = nxt_start > spans[end - 1][2]
        first_alpha = next((ch for ch in nxt_text if ch.isalnum()), "")
        if gap and (first_alpha.isupper() or nxt_text[0] in "\"'“‘(["):
            boundaries.append(end)
        k = end

    if not boundaries or boundaries[-1] != n:
        boundaries.append(n)
    out: list[Sentence] = []
    prev = 0
    for b in sorted(set(boundaries)):
        if b > prev:
            out.append(Sentence(tuple(tokens[prev:b])))
            prev = b
    return out


def split_to_chunks(sentences: Sequence[Sentence], chunk_size: int = 3) -> list[Chunk]:
    """Greedy left-to-right grouping into runs of ``chunk_size`` sentences."""
    if int(chunk_size) != chunk_size or chunk_size < 1:
        raise ConfigurationError(f"chunk_size must be an integer >= 1, got {chunk_size}")
    return [
        Chunk(i, tuple(sentences[start : start + chunk_size]))
        for i, start in enumerate(range(0, len(sentences), chunk_size))
    ]
