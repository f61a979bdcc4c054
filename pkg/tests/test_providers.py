import json

import httpx
import pytest

from promptshrink.exceptions import ConfigurationError, ProviderError, ProviderTimeout
from promptshrink.providers import (
    COMPRESSION_INSTRUCTION,
    AdverbDropProvider,
    EchoProvider,
    LinearLatencyProvider,
    LLMProvider,
    NoiseProvider,
    OpenAIChatProvider,
    RuleProvider,
    SimulatedClock,
    build_prompt,
    extract_source,
    resolve_provider,
)


def test_prompt_round_trip():
    p = build_prompt("Cats sleep.")
    assert p.startswith(COMPRESSION_INSTRUCTION)
    assert extract_source(p) == "Cats sleep."
    assert extract_source("plain") == "plain"


def test_mock_providers():
    p = build_prompt("The team worked really quickly.")
    assert EchoProvider().generate(p) == "The team worked really quickly."
    assert AdverbDropProvider().generate(p) == "The team worked."
    assert RuleProvider(1).generate(p) == "The team worked quickly."
    noise = NoiseProvider()
    assert noise.generate(p) == noise.generate(p) != noise.generate(build_prompt("Other."))
    for prov in (EchoProvider(), noise, AdverbDropProvider(), RuleProvider(2)):
        assert isinstance(prov, LLMProvider)
    with pytest.raises(ConfigurationError):
        RuleProvider(6)


def test_simulated_clock_and_linear_provider():
    clock = SimulatedClock()
    llm = LinearLatencyProvider(clock, b=0.5, a=1.0)
    llm.generate("a b c d")
    assert clock() == pytest.approx(3.0)
    with pytest.raises(ValueError):
        clock.advance(-1)


def test_resolve_provider(monkeypatch):
    assert resolve_provider("echo").name == "echo"
    assert resolve_provider("ppc-l4").name == "ppc-l4"
    with pytest.raises(ConfigurationError):
        resolve_provider("gpt-9000")
    monkeypatch.delenv("MY_KEY", raising=False)
    with pytest.raises(ConfigurationError, match="MY_KEY"):
        resolve_provider("openai:some-model", {"api_key_env": "MY_KEY"})


def _provider(handler, monkeypatch, **kw):
    monkeypatch.setenv("TEST_KEY", "k")
    return OpenAIChatProvider(
        "m1",
        base_url="http://llm.test/v1",
        api_key_env="TEST_KEY",
        requests_per_second=1000,
        transport=httpx.MockTransport(handler),
        sleep=lambda s: None,
        **kw,
    )


def test_openai_provider_retries_rate_limit(monkeypatch):
    calls = []

    def handler(request):
        calls.append(json.loads(request.content))
        if len(calls) < 3:
            return httpx.Response(429, headers={"retry-after": "0"})
        return httpx.Response(200, json={"choices": [{"message": {"content": "short"}}]})

    llm = _provider(handler, monkeypatch)
    assert llm.generate("long prompt", max_tokens=7) == "short"
    assert len(calls) == 3
    assert calls[0]["model"] == "m1" and calls[0]["max_tokens"] == 7


def test_openai_provider_client_error_is_not_retried(monkeypatch):
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(400, text="bad request")

    with pytest.raises(ProviderError, match="400"):
        _provider(handler, monkeypatch).generate("x")
    assert len(calls) == 1


def test_openai_provider_timeout(monkeypatch):
    def handler(request):
        raise httpx.ReadTimeout("slow", request=request)

    with pytest.raises(ProviderTimeout):
        _provider(handler, monkeypatch, retries=2).generate("x")


def test_openai_provider_server_errors_exhaust(monkeypatch):
    with pytest.raises(ProviderError, match="after 2 attempts"):
        _provider(lambda r: httpx.Response(503), monkeypatch, retries=2).generate("x")
