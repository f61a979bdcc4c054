"""Part-of-speech priority compression.

A deterministic, deletion-only rule engine: tokens are tagged from a lexicon
with suffix fallbacks, relation words are located, and a level-dependent rule
set removes low-priority material. Level ``k`` always runs on the output of
level ``k - 1`` and each level iterates its rules to a fixed point, so outputs
shrink monotonically with the level and re-simplifying is a no-op.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .text import RELATION_KINDS, Chunk, RelationAnnotation, Sentence, Token

RETAINED_SIDE = {
    "Contrast": "after",
    "Concessive": "both",
    "Causal": "after",
    "Result": "after",
    "Conditional": "after",
    "Progressive": "after",
    "Comparative": "both",
    "Coordinate": "both",
}

DEFAULT_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("tion", "noun"),
    ("sion", "noun"),
    ("ment", "noun"),
    ("ness", "noun"),
    ("ity", "noun"),
    ("ance", "noun"),
    ("ence", "noun"),
    ("ship", "noun"),
    ("ism", "noun"),
    ("ist", "noun"),
    ("ly", "adverb"),
    ("ize", "verb"),
    ("ise", "verb"),
    ("ate", "verb"),
    ("ify", "verb"),
    ("ous", "adjective"),
    ("ful", "adjective"),
    ("ive", "adjective"),
    ("able", "adjective"),
    ("ible", "adjective"),
    ("less", "adjective"),
    ("ical", "adjective"),
    ("al", "adjective"),
    ("ic", "adjective"),
    ("ish", "adjective"),
    ("ing", "verb"),
    ("ed", "verb"),
)

_NUMERIC = re.compile(r"^[+-]?\d[\d.,:/]*[a-z]*$", re.IGNORECASE)
_CLOSED = {"determiner", "pronoun", "preposition", "conjunction"}

NEGATIONS = frozenset(["not", "no", "never", "nor", "neither", "none", "nobody", "nothing", "cannot"])
INTENSIFIERS = frozenset(
    """very really quite extremely rather just actually basically simply literally
    truly highly totally completely entirely fully absolutely utterly particularly
    especially incredibly remarkably deeply greatly somewhat fairly merely""".split()
)
POSSESSIVES = frozenset("my your his her its our their".split())
COPULAS = frozenset(
    """be am is are was were been being seem seems seemed become becomes became
    remain remains remained look looks looked feel feels felt appear appears appeared""".split()
)
CATENATIVES = frozenset(
    """continue continues continued continuing begin begins began beginning start
    starts started starting seem seems seemed tend tends tended try tries tried
    trying manage manages managed appear appears appeared happen happens happened
    keep keeps kept keeping""".split()
)
RELATIVES = frozenset(["which", "who", "whom", "whose"])
SUBORDINATORS = frozenset(["when", "while", "whenever", "after", "before", "until", "once", "wherever"])
EXEMPLIFIERS: tuple[tuple[str, ...], ...] = (
    ("such", "as"),
    ("for", "example"),
    ("for", "instance"),
    ("including",),
    ("e.g",),
)
ARTICLES = frozenset(["a", "an", "the"])
COORDINATORS = frozenset(["and", "or", "nor"])
CLAUSE_DELIMS = frozenset([",", ";", ":", "—", "–", "--", "-"])
PAIR_DELIMS = frozenset([",", "—", "–", "--", "-"])


def is_negation(word: str) -> bool:
    w = word.lower()
    return w in NEGATIONS or w.endswith("n't") or w.endswith("n’t")


@dataclass(frozen=True)
class PosLexicon:
    """Case-folded word->POS map, suffix fallbacks and relation triggers."""

    words: Mapping[str, str]
    relations: Mapping[tuple[str, ...], str]
    suffix_rules: tuple[tuple[str, str], ...] = DEFAULT_SUFFIX_RULES
    name: str = "custom"

    def __post_init__(self) -> None:
        for phrase, kind in self.relations.items():
            if not phrase or not all(phrase):
                raise ValueError("relation triggers must be non-empty")
            if kind not in RELATION_KINDS:
                raise ValueError(f"unknown relation kind {kind!r} for {' '.join(phrase)!r}")
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_max_trigger_len", max((len(p) for p in self.relations), default=1))

    @classmethod
    def from_lines(cls, lines: Iterable[str], name: str = "custom") -> "PosLexicon":
        words: dict[str, str] = {}
        relations: dict[tuple[str, ...], str] = {}
        section = "pos"
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip().lower()
                continue
            key, _, value = raw.rstrip("\n").partition("\t")
            key, value = key.strip().lower(), value.strip()
            if not value:
                raise ValueError(f"malformed lexicon line: {raw!r}")
            if section == "pos":
                words.setdefault(key, value)
            elif section == "relations":
                relations[tuple(key.split())] = value
            else:
                raise ValueError(f"unknown lexicon section [{section}]")
        return cls(words, relations, name=name)

    @classmethod
    def load(cls, path: str | Path) -> "PosLexicon":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            return cls.from_lines(fh, name=path.name)

    @classmethod
    def default(cls) -> "PosLexicon":
        return _default_lexicon()

    @property
    def max_trigger_len(self) -> int:
        return self._max_trigger_len

    def _inflected(self, w: str) -> str | None:
        candidates: list[str] = []
        if w.endswith("ies") and len(w) > 4:
            candidates.append(w[:-3] + "y")
        if w.endswith("es") and len(w) > 3:
            candidates.append(w[:-2])
        if w.endswith("s") and len(w) > 3:
            candidates.append(w[:-1])
        if w.endswith("ied") and len(w) > 4:
            candidates.append(w[:-3] + "y")
        if w.endswith("ed") and len(w) > 4:
            candidates += [w[:-2], w[:-1], w[:-3]]
        if w.endswith("ing") and len(w) > 5:
            candidates += [w[:-3], w[:-3] + "e", w[:-4]]
        for c in candidates:
            pos = self.words.get(c)
            if pos in ("noun", "verb"):
                if w.endswith(("ed", "ing")):
                    return "verb"
                return pos
        return None

    def lookup(self, word: str) -> str:
        """Lexicon, then inflection stripping, then suffix rules, then noun."""
        w = word.lower()
        hit = self._cache.get(w)
        if hit is None:
            hit = self._cache[w] = self._lookup(w)
        return hit

    def _lookup(self, w: str) -> str:
        if _NUMERIC.match(w):
            return "numeral"
        if w in self.words:
            return self.words[w]
        for apos in ("'s", "’s"):
            if w.endswith(apos) and len(w) > 2:
                return "noun"
        if is_negation(w):
            return "adverb"
        if "-" in w.strip("-"):
            last = w.rsplit("-", 1)[1]
            if last:
                return self.lookup(last)
        pos = self._inflected(w)
        if pos:
            return pos
        for suffix, pos in self.suffix_rules:
            if w.endswith(suffix) and len(w) > len(suffix) + 2:
                return pos
        return "noun"


@lru_cache(maxsize=1)
def _default_lexicon() -> PosLexicon:
    ref = resources.files("promptshrink") / "data" / "en_lexicon.tsv"
    with ref.open(encoding="utf-8") as fh:
        return PosLexicon.from_lines(fh, name="en_lexicon.tsv")


def _is_capitalized(text: str) -> bool:
    first = next((ch for ch in text if ch.isalpha()), "")
    return first.isupper()


def pos_tag(sentence: Sentence, lexicon: PosLexicon | None = None) -> Sentence:
    """Tag every token and flag proper-noun spans.

    Capitalized tokens after the first word are proper nouns unless the lexicon
    lists them as closed-class words. A capitalized first word joins the span
    when it is unknown to the lexicon and the next token is also proper.
    """
    lexicon = lexicon or PosLexicon.default()
    toks = sentence.tokens
    first_word = next((i for i, t in enumerate(toks) if t.pos != "punctuation"), None)
    out: list[Token] = []
    for i, tok in enumerate(toks):
        if tok.pos == "punctuation":
            out.append(Token(tok.text, tok.index, "punctuation", tok.space_before, False))
            continue
        known = lexicon.words.get(tok.text.lower())
        proper = (
            i != first_word
            and _is_capitalized(tok.text)
            and known not in _CLOSED
            and not _NUMERIC.match(tok.text)
        )
        if known is not None and not proper:
            pos = known
        elif proper:
            pos = "noun"
        else:
            pos = lexicon.lookup(tok.text)
        out.append(Token(tok.text, tok.index, pos, tok.space_before, proper))
    if first_word is not None and first_word + 1 < len(out):
        head = out[first_word]
        if (
            _is_capitalized(head.text)
            and lexicon.words.get(head.text.lower()) not in _CLOSED
            and out[first_word + 1].proper
        ):
            out[first_word] = Token(head.text, head.index, "noun", head.space_before, True)
    return Sentence(tuple(out), sentence.relations)


def _match_phrase(words: Sequence[str], i: int, phrases: Mapping[tuple[str, ...], str], max_len: int):
    for n in range(min(max_len, len(words) - i), 0, -1):
        key = tuple(words[i : i + n])
        if key in phrases:
            return key, phrases[key]
    return None


def extract_relations(sentence: Sentence, lexicon: PosLexicon | None = None) -> list[RelationAnnotation]:
    lexicon = lexicon or PosLexicon.default()
    words = [t.text.lower() for t in sentence.tokens]
    out: list[RelationAnnotation] = []
    i = 0
    while i < len(words):
        hit = _match_phrase(words, i, lexicon.relations, lexicon.max_trigger_len)
        if hit is None:
            i += 1
            continue
        phrase, kind = hit
        out.append(
            RelationAnnotation(kind, sentence.tokens[i].index, RETAINED_SIDE[kind], " ".join(phrase))
        )
        i += len(phrase)
    return out


# --------------------------------------------------------------------------- rules

RULE_NAMES = (
    "proper-noun-protection",
    "remove-redundant-modifiers",
    "remove-paired-comma-or-dash-span",
    "remove-restrictive-clause-after-comma",
    "remove-nonessential-adj-adv",
    "remove-attributive/adverbial/appositive-clauses",
    "collapse-catenative-verb",
    "relation-side-retention",
    "svo-only-extraction",
)

_LEVEL_ADDS: dict[int, tuple[str, ...]] = {
    1: ("proper-noun-protection", "remove-redundant-modifiers"),
    2: ("remove-paired-comma-or-dash-span", "remove-restrictive-clause-after-comma"),
    3: (
        "remove-nonessential-adj-adv",
        "remove-attributive/adverbial/appositive-clauses",
        "collapse-catenative-verb",
    ),
    4: ("relation-side-retention",),
    5: ("svo-only-extraction",),
}


@dataclass(frozen=True)
class RuleSet:
    level: int
    rules: frozenset[str] = field(default=frozenset())

    @classmethod
    def for_level(cls, level: int) -> "RuleSet":
        if level not in _LEVEL_ADDS:
            raise ValueError(f"level must be 1..5, got {level}")
        names: set[str] = set()
        for k in range(1, level + 1):
            names.update(_LEVEL_ADDS[k])
        return cls(level, frozenset(names))

    def __post_init__(self) -> None:
        if not self.rules:
            object.__setattr__(self, "rules", RuleSet.for_level(self.level).rules)
        unknown = set(self.rules) - set(RULE_NAMES)
        if unknown:
            raise ValueError(f"unknown rules: {sorted(unknown)}")


@dataclass
class _Ctx:
    toks: list[Token]
    lexicon: PosLexicon

    @property
    def words(self) -> list[str]:
        return [t.text.lower() for t in self.toks]

    def is_delim(self, i: int) -> bool:
        return self.toks[i].is_punct and self.toks[i].text in CLAUSE_DELIMS

    def is_terminal(self, i: int) -> bool:
        t = self.toks[i]
        return t.is_punct and all(ch in ".!?…" for ch in t.text)

    def clause_end(self, i: int) -> int:
        """First position >= i holding a clause delimiter or terminal punctuation."""
        j = i
        while j < len(self.toks) and not (self.is_delim(j) or self.is_terminal(j)):
            j += 1
        return j

    def clause_start(self, i: int) -> int:
        j = i
        while j > 0 and not (self.is_delim(j - 1) or self.is_terminal(j - 1)):
            j -= 1
        return j

    def has_verb(self, a: int, b: int) -> bool:
        return any(t.pos == "verb" for t in self.toks[a:b])

    def span_with_delims(self, a: int, b: int) -> range:
        """Extend the deleted span [a, b) over the delimiters that bracket it."""
        n = len(self.toks)
        left = a - 1 if a > 0 and self.is_delim(a - 1) else None
        if left is not None and b < n and self.is_delim(b) and self.toks[b].text == self.toks[left].text:
            return range(left, b + 1)
        if left is not None and (b >= n or self.is_terminal(b)):
            return range(left, b)
        if left is None and a == 0 and b < n and self.is_delim(b):
            return range(a, b + 1)
        return range(a, b)


Rule = Callable[[_Ctx], set[int]]


def _redundant_modifiers(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    dels: set[int] = set()
    for i, t in enumerate(toks):
        if (
            t.pos == "adverb"
            and words[i] in INTENSIFIERS
            and i + 1 < len(toks)
            and toks[i + 1].pos in ("adjective", "adverb", "verb")
        ):
            dels.add(i)
    i = 0
    while i < len(toks):
        hit = next((p for p in EXEMPLIFIERS if words[i] == p[0] and tuple(words[i : i + len(p)]) == p), None)
        if hit is None:
            i += 1
            continue
        end = ctx.clause_end(i + len(hit))
        start = i
        if i > 0 and ctx.is_delim(i - 1):
            span = ctx.span_with_delims(i, end)
        else:
            j = i - 1
            while j >= 0 and toks[j].pos in ("noun", "adjective", "determiner", "numeral"):
                j -= 1
            if j >= 0 and j < i - 1 and toks[j].pos == "preposition" and not _is_trigger(ctx, j):
                start = j
            span = range(start, end)
        if end > i + len(hit):
            dels.update(span)
        i = end
    return dels


def _is_trigger(ctx: _Ctx, i: int, kinds: Iterable[str] | None = None) -> bool:
    hit = _match_phrase(ctx.words, i, ctx.lexicon.relations, ctx.lexicon.max_trigger_len)
    if hit is None:
        return False
    return kinds is None or hit[1] in kinds


_NON_COORD = tuple(k for k in RELATION_KINDS if k != "Coordinate")


def _is_essential(ctx: _Ctx, a: int, b: int) -> bool:
    for i in range(a, b):
        t = ctx.toks[i]
        if t.proper or t.pos == "numeral" or is_negation(t.text) or _is_trigger(ctx, i, _NON_COORD):
            return True
    return False


def _reduce_span(ctx: _Ctx, a: int, b: int) -> set[int]:
    """Keep relation words, nouns, numerals and negations inside [a, b)."""
    keep: set[int] = set()
    i = a
    while i < b:
        hit = _match_phrase(ctx.words, i, ctx.lexicon.relations, ctx.lexicon.max_trigger_len)
        if hit is not None and hit[1] != "Coordinate":
            keep.update(range(i, min(b, i + len(hit[0]))))
            i += len(hit[0])
            continue
        t = ctx.toks[i]
        if t.pos in ("noun", "numeral") or t.proper or is_negation(t.text):
            keep.add(i)
        i += 1
    return set(range(a, b)) - keep


def _has_content(ctx: _Ctx, kept: Iterable[int]) -> bool:
    return any(
        ctx.toks[k].pos in ("noun", "numeral") or ctx.toks[k].proper or is_negation(ctx.toks[k].text)
        for k in kept
    )


def _is_list_item(ctx: _Ctx, a: int, b: int) -> bool:
    """True when the comma-bounded span [a, b) is an element of "x, y and z"."""
    if ctx.toks[b].text != "," or b - a > 4 or ctx.has_verb(a, b):
        return False
    end = ctx.clause_end(b + 1)
    return any(w in COORDINATORS for w in ctx.words[b + 1 : end]) and not ctx.has_verb(b + 1, end)


def _paired_span(ctx: _Ctx) -> set[int]:
    toks = ctx.toks
    dels: set[int] = set()
    i = 0
    while i < len(toks):
        if not (toks[i].is_punct and toks[i].text in PAIR_DELIMS):
            i += 1
            continue
        j = i + 1
        while j < len(toks) and not (ctx.is_delim(j) or ctx.is_terminal(j)):
            j += 1
        if j >= len(toks) or toks[j].text != toks[i].text or j == i + 1:
            i = j if j > i + 1 else i + 1
            continue
        if _is_list_item(ctx, i + 1, j):
            i = j
            continue
        essential = _is_essential(ctx, i + 1, j)
        if essential and ctx.words[i + 1] in RELATIVES | SUBORDINATORS:
            # a full clause is either dropped whole or kept whole
            i = j + 1
            continue
        reduced = _reduce_span(ctx, i + 1, j) if essential else None
        if reduced is not None and _has_content(ctx, set(range(i + 1, j)) - reduced):
            dels |= reduced
        else:
            dels.update(range(i, j + 1))
        i = j + 1
    return dels


def _starts_clause(ctx: _Ctx, i: int) -> bool:
    t = ctx.toks[i]
    w = t.text.lower()
    return w in RELATIVES or (t.pos == "verb" and w.endswith(("ing", "ed")))


def _restrictive_after_comma(ctx: _Ctx) -> set[int]:
    commas = [i for i, t in enumerate(ctx.toks) if t.is_punct and t.text == ","]
    if len(commas) != 1:
        return set()
    c = commas[0]
    if c + 1 >= len(ctx.toks) or not _starts_clause(ctx, c + 1):
        return set()
    end = ctx.clause_end(c + 1)
    if _is_essential(ctx, c + 1, end):
        return set()
    return set(range(c, end))


def _content_count(ctx: _Ctx, a: int, b: int) -> int:
    return sum(1 for t in ctx.toks[a:b] if t.priority > 0)


def _nonessential_adj_adv(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    dels: set[int] = set()
    for i, t in enumerate(toks):
        possessive = t.pos == "determiner" and words[i] in POSSESSIVES
        if not (t.pos in ("adjective", "adverb") or possessive):
            continue
        if t.proper or is_negation(t.text):
            continue
        k = i - 1
        while k >= 0 and toks[k].pos == "adverb":
            k -= 1
        if t.pos == "adjective" and k >= 0 and words[k] in COPULAS:
            continue
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        if t.pos == "adjective" and (nxt is None or nxt.pos not in ("noun", "adjective", "numeral")):
            continue
        if nxt is None or ctx.is_delim(i + 1) or ctx.is_terminal(i + 1):
            if i > 0 and toks[i - 1].pos in ("conjunction", "preposition"):
                continue
        if t.pos != "determiner":
            a, b = ctx.clause_start(i), ctx.clause_end(i)
            if _content_count(ctx, a, b) <= 1:
                continue
        dels.add(i)
    return dels


def _clauses(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    n = len(toks)
    dels: set[int] = set()
    for i, t in enumerate(toks):
        w = words[i]
        relative = i > 0 and (
            w in RELATIVES
            or (
                w == "that"
                and toks[i - 1].pos == "noun"
                and i + 1 < n
                and toks[i + 1].pos in ("verb", "pronoun", "determiner")
            )
        )
        adverbial = w in SUBORDINATORS and ctx.has_verb(i + 1, ctx.clause_end(i + 1))
        if relative or adverbial:
            end = ctx.clause_end(i + 1)
            if not _is_essential(ctx, i, end):
                dels.update(ctx.span_with_delims(i, end))
    # trailing appositive: ", the new chief." after a noun
    for i, t in enumerate(toks):
        if t.is_punct and t.text == "," and 0 < i and toks[i - 1].pos == "noun":
            end = ctx.clause_end(i + 1)
            if (
                i + 1 < end
                and (end >= n or ctx.is_terminal(end))
                and words[i + 1] in ARTICLES
                and not ctx.has_verb(i + 1, end)
                and not _is_essential(ctx, i + 1, end)
            ):
                dels.update(range(i, end))
    return dels


def _catenative(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    dels: set[int] = set()
    for i in range(len(toks) - 1):
        if toks[i].pos != "verb" or words[i] not in CATENATIVES:
            continue
        if words[i + 1] == "to" and i + 2 < len(toks) and toks[i + 2].pos == "verb":
            dels.update((i, i + 1))
        elif words[i].startswith("keep") and toks[i + 1].pos == "verb" and words[i + 1].endswith("ing"):
            dels.add(i)
    return dels


def _relation_sides(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    dels: set[int] = set()
    i = 0
    while i < len(toks):
        hit = _match_phrase(words, i, ctx.lexicon.relations, ctx.lexicon.max_trigger_len)
        if hit is None:
            i += 1
            continue
        phrase, kind = hit
        end_trig = i + len(phrase)
        if kind in ("Contrast", "Result", "Progressive"):
            if i == 0:
                # sentence-initial linker: the whole sentence is the retained side
                after = end_trig + 1 if end_trig < len(toks) and ctx.is_delim(end_trig) else end_trig
                if ctx.has_verb(after, len(toks)):
                    dels.update(range(0, after))
            else:
                after_end = ctx.clause_end(end_trig) if kind != "Contrast" else len(toks)
                if ctx.has_verb(0, i) and ctx.has_verb(end_trig, after_end):
                    after = end_trig + 1 if end_trig < len(toks) and ctx.is_delim(end_trig) else end_trig
                    dels.update(range(0, after))
        i = end_trig
    return dels


def _svo(ctx: _Ctx) -> set[int]:
    toks, words = ctx.toks, ctx.words
    keep: set[int] = set()
    verb = next((i for i, t in enumerate(toks) if t.pos == "verb"), None)
    if verb is None:
        noun = next((i for i, t in enumerate(toks) if t.pos == "noun"), None)
        if noun is not None:
            keep.add(noun)
    else:
        end = verb
        while end + 1 < len(toks) and (toks[end + 1].pos == "verb" or is_negation(toks[end + 1].text)):
            end += 1
        keep.update(range(verb, end + 1))
        subj = next((i for i in range(verb) if toks[i].pos == "noun"), None)
        if subj is None:
            subj = next((i for i in range(verb) if toks[i].pos == "pronoun"), None)
        if subj is not None:
            keep.add(subj)
            if subj > 0 and words[subj - 1] in ARTICLES:
                keep.add(subj - 1)
        obj = next((i for i in range(end + 1, len(toks)) if toks[i].pos == "noun"), None)
        if obj is not None:
            keep.add(obj)
        keep.update(i for i in range(len(toks)) if is_negation(toks[i].text))
    keep.update(i for i, t in enumerate(toks) if t.proper)
    if toks and ctx.is_terminal(len(toks) - 1):
        keep.add(len(toks) - 1)
    return set(range(len(toks))) - keep


_RULES: dict[str, Rule] = {
    "remove-redundant-modifiers": _redundant_modifiers,
    "remove-paired-comma-or-dash-span": _paired_span,
    "remove-restrictive-clause-after-comma": _restrictive_after_comma,
    "remove-nonessential-adj-adv": _nonessential_adj_adv,
    "remove-attributive/adverbial/appositive-clauses": _clauses,
    "collapse-catenative-verb": _catenative,
    "relation-side-retention": _relation_sides,
    "svo-only-extraction": _svo,
}


def _tidy(ctx: _Ctx) -> set[int]:
    """Drop delimiters left dangling by earlier deletions."""
    toks = ctx.toks
    n = len(toks)
    dels: set[int] = set()
    for i in range(n):
        if not ctx.is_delim(i):
            continue
        first = all(k in dels or toks[k].is_punct for k in range(i))
        if first or i + 1 >= n or ctx.is_terminal(i + 1) or ctx.is_delim(i + 1):
            dels.add(i)
    return dels


def _delete(toks: list[Token], positions: set[int], protect: bool) -> list[Token]:
    if protect:
        positions = {p for p in positions if not toks[p].proper}
    if not positions:
        return toks
    kept = [t for i, t in enumerate(toks) if i not in positions]
    if not any(not t.is_punct for t in kept) and any(not t.is_punct for t in toks):
        best = max(range(len(toks)), key=lambda i: (toks[i].priority, -i))
        kept = [t for i, t in enumerate(toks) if i not in positions or i == best]
    return kept


def _run_rules(toks: list[Token], names: Sequence[str], lexicon: PosLexicon, protect: bool) -> list[Token]:
    deleted = False
    while True:
        before = toks
        for name in names:
            toks = _delete(toks, _RULES[name](_Ctx(toks, lexicon)), protect)
        if toks != before:
            deleted = True
            continue
        if deleted:
            tidied = _delete(toks, _tidy(_Ctx(toks, lexicon)), protect)
            if tidied != toks:
                toks = tidied
                continue
        return toks


def simplify(sentence: Sentence, rules: RuleSet | int, lexicon: PosLexicon | None = None) -> Sentence:
    """Deletion-only simplification of a tagged sentence.

    ``rules`` may be a :class:`RuleSet` or a bare level (1-5).
    """
    lexicon = lexicon or PosLexicon.default()
    if isinstance(rules, int):
        rules = RuleSet.for_level(rules)
    toks = list(sentence.tokens)
    if not toks:
        return sentence
    protect = "proper-noun-protection" in rules.rules
    active: list[str] = []
    for level in range(1, 6):
        added = [n for n in _LEVEL_ADDS[level] if n in rules.rules and n in _RULES]
        if added:
            active += added
            toks = _run_rules(toks, active, lexicon, protect)
    out = Sentence(tuple(toks))
    return Sentence(out.tokens, tuple(extract_relations(out, lexicon)))


def token_compress(chunk: Chunk, rules: RuleSet | int, lexicon: PosLexicon | None = None) -> Chunk:
    """Tag, annotate and simplify every sentence of a chunk; sentence order is kept."""
    lexicon = lexicon or PosLexicon.default()
    out = []
    for s in chunk.sentences:
        tagged = pos_tag(s, lexicon)
        tagged = Sentence(tagged.tokens, tuple(extract_relations(tagged, lexicon)))
        out.append(simplify(tagged, rules, lexicon))
    return Chunk(chunk.id, tuple(out))


# --------------------------------------------------------------------------- comparison helper

_INFLECTIONS = ("ing", "es", "ed", "s")


def inflection_key(word: str) -> str:
    """Crude stem: one of -ing/-es/-ed/-s removed, then a final "e" (make, making -> mak)."""
    w = word.lower()
    for suf in _INFLECTIONS:
        if w.endswith(suf) and len(w) - len(suf) >= 2:
            w = w[: -len(suf)]
            break
    return w[:-1] if w.endswith("e") and len(w) >= 3 else w


def equivalent_modulo_inflection(a: str, b: str, ordered: bool = False) -> bool:
    """Compare two strings word-by-word ignoring case, punctuation and -s/-es/-ed/-ing.

    With ``ordered=False`` the comparison is on word multisets, which tolerates
    the reordering that a deletion-only engine cannot reproduce.
    """
    from .text import is_punctuation, tokenize

    ka = [inflection_key(t) for t in tokenize(a) if not is_punctuation(t)]
    kb = [inflection_key(t) for t in tokenize(b) if not is_punctuation(t)]
    return ka == kb if ordered else Counter(ka) == Counter(kb)
