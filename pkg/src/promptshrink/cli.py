"""Command-line entry point: compress, distill, eval and bench.

Every subcommand accepts ``--config FILE``. The file is flat ``key = value``
text: one pair per line, ``#`` starts a comment, surrounding quotes are
dropped, and keys use the long flag name with dashes or underscores
(``rate = 0.2``, ``chunk-size = 4``). Built-in defaults are overridden by the
file, which is overridden by flags given on the command line.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .compressor import compress_to_target
from .distill import RLFTConfig, build_dataset, write_shards
from .exceptions import ConfigurationError, EmptyInputError, ProviderError
from .metrics import evaluate_pair, latency_bench
from .pos import PosLexicon
from .providers import LOCAL_PROVIDERS, LinearLatencyProvider, SimulatedClock, resolve_provider
from .scoring import HashingEmbedder
from .text import CompressionConfig

EXIT_OK, EXIT_ERROR, EXIT_BEST_EFFORT = 0, 1, 2


def _level(v: str) -> int:
    n = int(v)
    if not 1 <= n <= 5:
        raise argparse.ArgumentTypeError(f"level must be 1..5, got {n}")
    return n


# name -> (type, default, help); shared by flags and config keys
_COMPRESS_OPTS: dict[str, tuple[Callable[[str], Any], Any, str]] = {
    "query": (str, None, "question used to rank chunks by relevance"),
    "rate": (float, 0.5, "target retained-token fraction R_t in (0, 1]"),
    "level": (_level, 3, "rule level 1..5"),
    "mode": (str, "standard", "standard | performance"),
    "chunk-size": (int, 3, "sentences per chunk"),
    "alpha": (float, 0.5, "relevance weight"),
    "beta": (float, 0.5, "importance weight"),
    "decay-lambda": (float, 0.5, "positional decay inside the importance score"),
    "lm-order": (int, 3, "n-gram order of the perplexity model"),
}
_COMMON_OPTS = {"jobs": (int, 1, "worker cap for parallel stages")}
_OPTS: dict[str, dict[str, tuple]] = {
    "compress": {
        "input": (str, "-", "input file, or - for stdin"),
        "trace": (str, None, "write the JSON trace here"),
        **_COMPRESS_OPTS,
    },
    "distill": {
        "corpus": (str, None, "directory of .txt documents (or a single file)"),
        "providers": (str, None, "comma-separated provider names"),
        "tau-sim": (float, 0.85, "similarity threshold for a non-zero reward"),
        "beta-kl": (float, 1.0, "KL scaling of the sample weights"),
        "block-size": (int, 3, "sentences per training block"),
        "out": (str, None, "output directory for shards"),
        "shard-size": (int, 1000, "samples per shard"),
        "compare": (str, "prompt", "prompt | output"),
        "target-llm": (str, None, "provider used when --compare output"),
        "base-url": (str, None, "endpoint for openai:MODEL providers"),
        "api-key-env": (str, None, "environment variable holding the API key"),
    },
    "eval": {
        "tasks": (str, None, "JSON-lines task file"),
        "format": (str, "text", "text | json"),
        **_COMPRESS_OPTS,
    },
    "bench": {
        "tasks": (str, None, "JSON-lines task file"),
        "provider": (str, "linear-mock", "LLM provider name"),
        "response-tokens": (int, 200, "response length requested from the LLM"),
        "latency-a": (float, 0.0, "linear-mock fixed cost per call (s)"),
        "latency-b": (float, 0.001, "linear-mock cost per prompt token (s)"),
        "format": (str, "text", "text | json"),
        "base-url": (str, None, "endpoint for openai:MODEL providers"),
        "api-key-env": (str, None, "environment variable holding the API key"),
        **_COMPRESS_OPTS,
    },
}


def read_config(path: str | Path) -> dict[str, str]:
    """Parse the flat ``key = value`` format into raw strings."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        value = value.strip()
        if value[:1] in ("'", '"') and value.count(value[0]) >= 2:
            value = value[1 : value.index(value[0], 1)]
        else:
            value = value.split(" #", 1)[0].strip()
        out[key.strip().replace("_", "-").lower()] = value
    return out


def resolve_settings(command: str, args: argparse.Namespace) -> dict[str, Any]:
    """defaults < config file < explicit flags."""
    opts = {**_COMMON_OPTS, **_OPTS[command]}
    settings = {k: default for k, (_, default, _) in opts.items()}
    if getattr(args, "config", None):
        for key, raw in read_config(args.config).items():
            if key not in opts:
                raise ConfigurationError(f"unknown config key {key!r} for {command}")
            try:
                settings[key] = opts[key][0](raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigurationError(f"config key {key!r}: {exc}") from exc
    for key in opts:
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            settings[key] = v
    return settings


def _compression_config(s: dict[str, Any]) -> CompressionConfig:
    return CompressionConfig(
        alpha=s["alpha"],
        beta=s["beta"],
        target_rate=s["rate"],
        level=s["level"],
        mode=s["mode"],
        chunk_size=s["chunk-size"],
        decay_lambda=s["decay-lambda"],
    )


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _provider_settings(s: dict[str, Any]) -> dict[str, str]:
    return {k.replace("-", "_"): s[k] for k in ("base-url", "api-key-env") if s.get(k)}


def cmd_compress(s: dict[str, Any]) -> int:
    config = _compression_config(s)
    text = _read_input(s["input"])
    result = compress_to_target(text, s["query"], config, lm_order=s["lm-order"], jobs=s["jobs"])
    sys.stdout.write(result.text + "\n")
    if s["trace"]:
        Path(s["trace"]).write_text(result.to_json() + "\n", encoding="utf-8")
    if result.best_effort:
        print(
            f"warning: target rate {config.target_rate} not met, best effort {result.achieved_rate:.4f}",
            file=sys.stderr,
        )
        return EXIT_BEST_EFFORT
    return EXIT_OK


def _corpus_texts(path: str) -> list[str]:
    p = Path(path)
    files = sorted(p.glob("*.txt")) if p.is_dir() else [p]
    if not files:
        raise EmptyInputError(f"no .txt documents under {path}")
    return [f.read_text(encoding="utf-8") for f in files]


def cmd_distill(s: dict[str, Any]) -> int:
    cfg = RLFTConfig(tau_sim=s["tau-sim"], beta_kl=s["beta-kl"], block_size=s["block-size"])
    names = [n for n in (s["providers"] or "").split(",") if n.strip()]
    if not names:
        raise ConfigurationError("no providers given (use --providers)")
    if not s["corpus"] or not s["out"]:
        raise ConfigurationError("--corpus and --out are required")
    extra = _provider_settings(s)
    providers = [resolve_provider(n, extra) for n in names]
    target = resolve_provider(s["target-llm"], extra) if s["target-llm"] else None
    texts = _corpus_texts(s["corpus"])
    samples, manifest = build_dataset(texts, providers, cfg, jobs=s["jobs"], compare=s["compare"], target_llm=target)
    paths = write_shards(samples, manifest, s["out"], s["shard-size"])
    print(f"{manifest['samples']} samples, {manifest['kept']} kept, {len(paths)} shard(s) in {s['out']}")
    return EXIT_OK


def _read_tasks(path: str | None, errata: list[dict]) -> list[dict]:
    if not path:
        raise ConfigurationError("--tasks is required")
    tasks = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict) or not isinstance(rec.get("context"), str) or not rec["context"].strip():
                raise ValueError("record needs a non-empty 'context' string")
        except ValueError as exc:
            errata.append({"line": lineno, "error": str(exc)})
            continue
        rec.setdefault("id", str(lineno))
        tasks.append(rec)
    return tasks


def _errata_lines(errata: list[dict]) -> list[str]:
    return [f"errata: line {e['line']}: {e['error']}" for e in errata]


def cmd_eval(s: dict[str, Any]) -> int:
    errata: list[dict] = []
    tasks = _read_tasks(s["tasks"], errata)
    config = _compression_config(s)
    embedder = HashingEmbedder()
    rows = []
    for rec in tasks:
        try:
            comp = rec.get("compressed")
            if not isinstance(comp, str):
                q = rec.get("question") or s["query"]
                comp = compress_to_target(rec["context"], q, config, lm_order=s["lm-order"], jobs=s["jobs"]).text
            rows.append(evaluate_pair(str(rec["id"]), rec["context"], comp, rec.get("reference"), embedder))
        except (ValueError, ProviderError) as exc:
            errata.append({"line": rec["id"], "error": str(exc)})
    if s["format"] == "json":
        payload = {"embedder": embedder.name, "rows": [r.__dict__ for r in rows], "errata": errata}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"embedder: {embedder.name}")
        print(f"{'id':<12} {'orig':>6} {'comp':>6} {'sim':>7} {'cse':>7} {'bleu':>7} {'rougeL':>7} {'f1':>7}")
        for r in rows:
            print(
                f"{r.id:<12} {r.original_tokens:>6} {r.compressed_tokens:>6} {r.similarity:>7.4f} "
                f"{r.cse:>7.4f} {r.bleu:>7.4f} {r.rouge_l:>7.4f} {r.f1:>7.4f}"
            )
        for line in _errata_lines(errata):
            print(line)
    if not rows:
        print("error: no task produced a result", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_bench(s: dict[str, Any]) -> int:
    errata: list[dict] = []
    tasks = _read_tasks(s["tasks"], errata)
    if not tasks:
        print("error: no usable tasks", file=sys.stderr)
        return EXIT_ERROR
    config = _compression_config(s)
    if s["provider"] == "linear-mock":
        clock = SimulatedClock()
        llm = LinearLatencyProvider(clock, b=s["latency-b"], a=s["latency-a"])
    else:
        import time

        clock = time.perf_counter
        llm = resolve_provider(s["provider"], _provider_settings(s))

    def pipeline(text: str) -> str:
        return compress_to_target(text, s["query"], config, lm_order=s["lm-order"], jobs=s["jobs"]).text

    report = latency_bench(pipeline, llm, [(str(t["id"]), t["context"]) for t in tasks], s["response-tokens"], clock)
    if s["format"] == "json":
        out = report.to_dict()
        out["errata"] = errata + out["errata"]
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(report.to_text())
        for line in _errata_lines(errata):
            print(line)
    return EXIT_OK if report.rows else EXIT_ERROR


def version_string() -> str:
    lex = PosLexicon.default()
    digest = hashlib.blake2b(
        json.dumps(sorted(lex.words.items())).encode("utf-8"), digest_size=6
    ).hexdigest()
    return (
        f"promptshrink {__version__}\n"
        f"lexicon {lex.name} ({len(lex.words)} words, {len(lex.relations)} triggers, {digest})\n"
        f"embedder {HashingEmbedder.name}\n"
        f"providers {', '.join(LOCAL_PROVIDERS)}, linear-mock, openai:MODEL"
    )


class _VersionAction(argparse.Action):
    def __init__(self, option_strings, dest, **kwargs):
        super().__init__(option_strings, dest, nargs=0, default=argparse.SUPPRESS, help="show versions and exit")

    def __call__(self, parser, namespace, values, option_string=None):
        print(version_string())
        parser.exit()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promptshrink", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action=_VersionAction)
    sub = parser.add_subparsers(dest="command", required=True)
    for command, opts in _OPTS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", help="flat key = value settings file")
        for key, (typ, default, help_) in {**_COMMON_OPTS, **opts}.items():
            shown = f" (default: {default})" if default is not None else ""
            # None marks "not given" so config values survive
            p.add_argument(f"--{key}", type=typ, default=None, help=help_ + shown)
    return parser


_COMMANDS = {"compress": cmd_compress, "distill": cmd_distill, "eval": cmd_eval, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args.command, args)
        return _COMMANDS[args.command](settings)
    except (OSError, ValueError, ProviderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
