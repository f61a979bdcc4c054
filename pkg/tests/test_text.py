import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from promptshrink.exceptions import ConfigurationError
from promptshrink.text import (
    CompressionConfig,
    CompressionResult,
    Document,
    RelationAnnotation,
    Token,
    count_tokens,
    priority_of,
    ratio_label,
    set_token_counter,
    tokenize,
    tokenize_spans,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("The economy grows.", ["The", "economy", "grows", "."]),
        ("state-of-the-art models", ["state-of-the-art", "models"]),
        ("don't stop", ["don't", "stop"]),
        ("U.S. data", ["U.S", ".", "data"]),
        ('"Hello," she said...', ['"', "Hello", ",", '"', "she", "said", "..."]),
        ("(a) b?!", ["(", "a", ")", "b", "?", "!"]),
        ("--", ["--"]),
        ("", []),
        ("   \n\t ", []),
    ],
)
def test_tokenize_examples(text, expected):
    assert tokenize(text) == expected


def test_spans_point_back_into_text():
    text = "  Shares fell, 3.5% lower — again!"
    for tok, start, end in tokenize_spans(text):
        assert text[start:end] == tok


def test_count_tokens_matches_tokenize_and_adapter():
    text = "Costs rose (sharply), again."
    assert count_tokens(text) == len(tokenize(text)) == 8
    set_token_counter(lambda s: len(s))
    try:
        assert count_tokens("abc") == 3
    finally:
        set_token_counter(None)
    assert count_tokens("abc") == 1


@given(st.lists(st.text(max_size=20), max_size=6))
def test_token_counts_add_over_space_joins(parts):
    assert count_tokens(" ".join(parts)) == sum(count_tokens(p) for p in parts)


@given(st.text(max_size=60))
def test_tokenize_is_stable_under_rejoin(text):
    toks = tokenize(text)
    assert tokenize(" ".join(toks)) == toks


@pytest.mark.parametrize("pos, p", [("noun", 4), ("verb", 3), ("adjective", 2), ("adverb", 1), ("punctuation", 0), ("other", 0)])
def test_priority_scale(pos, p):
    assert priority_of(pos) == p
    assert Token("x", 0, pos).priority == p


def test_relation_annotation_validates():
    with pytest.raises(ValueError):
        RelationAnnotation("Sarcasm", 0, "after")
    with pytest.raises(ValueError):
        RelationAnnotation("Contrast", 0, "middle")


def test_document_round_trip(tmp_path):
    doc = Document.from_text('He said "no." Then he left, quietly. Done!')
    path = tmp_path / "doc.json"
    doc.save(path)
    again = Document.load(path)
    assert again == doc
    assert again.text == doc.text
    assert json.loads(path.read_text())["version"] == 1


def test_document_text_restores_spacing():
    text = "Prices rose (again), sharply. Costs fell."
    assert Document.from_text(text).text == text


def test_config_normalizes_weights():
    cfg = CompressionConfig(alpha=0.3, beta=0.3)
    assert cfg.alpha == pytest.approx(0.5)
    assert cfg.beta == pytest.approx(0.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alpha": -0.1},
        {"alpha": 0.0, "beta": 0.0},
        {"target_rate": 0.0},
        {"target_rate": 1.5},
        {"level": 6},
        {"mode": "fast"},
        {"chunk_size": 0},
        {"decay_lambda": -1},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ConfigurationError):
        CompressionConfig(**kwargs)


@pytest.mark.parametrize("rate, label", [(0.1931, "5x"), (0.2, "5x"), (0.5, "2x"), (1.0, "1x"), (0.125, "8x"), (0.0, "inf")])
def test_ratio_label(rate, label):
    assert ratio_label(rate) == label


def test_result_json_is_sorted_and_labelled():
    res = CompressionResult("x", 0.5, 0.2, 1, 5, False)
    data = json.loads(res.to_json())
    assert data["ratio_label"] == "5x"
    assert list(data) == sorted(data)
