import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from corpus import fuzz_corpus
from promptshrink.estimator import PromptShrinker
from promptshrink.exceptions import ConfigurationError
from promptshrink.text import count_tokens

DOCS = [" ".join(fuzz_corpus(15, seed=s)) for s in range(4)]


def test_params_round_trip_through_clone():
    est = PromptShrinker(target_rate=0.3, level=4, query="vote")
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    twin.set_params(level=2)
    assert twin.level == 2 and est.level == 4


def test_transform_before_fit():
    with pytest.raises(NotFittedError):
        PromptShrinker().transform(DOCS)


def test_fit_transform_shrinks_each_document():
    est = PromptShrinker(target_rate=0.4)
    out = est.fit_transform(DOCS)
    assert len(out) == len(DOCS)
    for src, dst in zip(DOCS, out):
        assert count_tokens(dst) < count_tokens(src)
    assert est.embedder_.idf


def test_compress_returns_trace_and_uses_default_query():
    est = PromptShrinker(target_rate=0.3, query="board vote").fit(DOCS)
    res = est.compress(DOCS[0])
    assert res.text == est.transform(DOCS[:1])[0]
    assert res.text == est.transform(DOCS[:1], queries=["board vote"])[0]


def test_corpus_language_model():
    est = PromptShrinker(lm_source="corpus", lm_order=2).fit(DOCS)
    assert est.lm_.order == 2
    assert est.transform(DOCS[:1])


@pytest.mark.parametrize("bad", ["a single string", [1, 2]])
def test_input_validation(bad):
    with pytest.raises(TypeError):
        PromptShrinker().fit(bad)


def test_bad_params_surface_at_fit():
    with pytest.raises(ConfigurationError):
        PromptShrinker(level=9).fit(DOCS)
    with pytest.raises(ConfigurationError):
        PromptShrinker(lm_source="web").fit(DOCS)


def test_query_length_mismatch():
    est = PromptShrinker().fit(DOCS)
    with pytest.raises(ValueError):
        est.transform(DOCS, queries=["q"])


def test_works_inside_pipeline():
    pipe = make_pipeline(PromptShrinker(target_rate=0.5, level=1))
    assert len(pipe.fit_transform(DOCS)) == len(DOCS)
