import pytest

from promptshrink.exceptions import ConfigurationError
from promptshrink.segment import split_sentences, split_to_chunks


def texts(s):
    return [x.text for x in split_sentences(s)]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("One. Two! Three?", ["One.", "Two!", "Three?"]),
        ("Dr. Smith arrived. He sat.", ["Dr. Smith arrived.", "He sat."]),
        ("Use tools, e.g. hammers. Fine.", ["Use tools, e.g. hammers.", "Fine."]),
        ("It rose 3.5 percent. Then fell.", ["It rose 3.5 percent.", "Then fell."]),
        ('He said "stop." Then left.', ['He said "stop."', "Then left."]),
        ("Wait... what happened? nobody knows.", ["Wait... what happened? nobody knows."]),
        ("Heading\n\nbody text here", ["Heading", "body text here"]),
        ("no terminator at all", ["no terminator at all"]),
        ("", []),
    ],
)
def test_split_sentences(text, expected):
    assert texts(text) == expected


def test_indices_are_global_and_punctuation_marked():
    sents = split_sentences("A b. C d.", start_index=10)
    idx = [t.index for s in sents for t in s.tokens]
    assert idx == list(range(10, 16))
    assert [t.pos for t in sents[0].tokens] == ["other", "other", "punctuation"]


@pytest.mark.parametrize("n, size, shape", [(6, 3, [3, 3]), (7, 3, [3, 3, 1]), (0, 3, []), (2, 5, [2])])
def test_split_to_chunks(n, size, shape):
    sents = split_sentences(" ".join(f"S{i} x." for i in range(n)))
    chunks = split_to_chunks(sents, size)
    assert [len(c.sentences) for c in chunks] == shape
    assert [c.id for c in chunks] == list(range(len(shape)))


def test_chunk_size_validated():
    with pytest.raises(ConfigurationError):
        split_to_chunks([], 0)
