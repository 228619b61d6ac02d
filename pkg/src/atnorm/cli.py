"""Streaming command-line front end.

Subcommands: normalize, attack, evaluate, bench, serve.  Option values
resolve in precedence order: command-line flag, then ATN_<NAME>
environment variable, then the --config key-value file, then the built-in
default.  Exit codes are a stable scripting contract: 0 success, 2 partial
(some input lines skipped), 64 usage, 65 bad input data, 69 external
service unavailable.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from datetime import datetime, timezone

from pathlib import Path

from .attacks import ATTACK_KINDS, attack_corpus
from .chardata import TableError, data_path, load_word_list
from .classifiers import BuiltinClassifier, ExternalClassifier
from .evaluation import (
    ConditionAbortedError,
    DatasetError,
    EvalReport,
    emit_report,
    format_summary,
    load_bench_corpus,
    load_dataset,
    run_matrix,
    throughput_bench,
)
from .normalizer import PASS_ORDER, Normalizer, NormalizerConfig

__all__ = ["main"]

EX_OK = 0
EX_PARTIAL = 2
EX_USAGE = 64
EX_DATA = 65
EX_UNAVAILABLE = 69


class CliUsageError(Exception):
    pass


class CliDataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 instead of argparse's default 2
        raise CliUsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Option resolution: flag > ATN_* env > config file > default


def _parse_bool(raw: str) -> bool:
    low = raw.strip().casefold()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise CliUsageError(f"expected a boolean, got {raw!r}")


def _parse_int(raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise CliUsageError(f"expected an integer, got {raw!r}") from None


def _parse_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


# Keys the config file and ATN_* environment may set, with their parsers.
_OPTION_PARSERS = {
    "seed": _parse_int,
    "threshold": _parse_int,
    "passes": _parse_list,
    "lexicon": str,
    "censor_lexicon": str,
    "url_detection": _parse_bool,
    "field": str,
    "format": str,
    "threads": _parse_int,
    "attacks": _parse_list,
    "classifier": str,
    "task": str,
    "attack_field": str,
    "corpus": str,
    "runs": _parse_int,
    "backends": str,
    "port": _parse_int,
    "bind": str,
    "static": str,
    "session_log": str,
    "timestamps": _parse_bool,
    "trace": _parse_bool,
}


def _load_config_file(path: str) -> dict:
    values: dict[str, str] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CliUsageError(f"cannot read config file {path}: {exc}") from None
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise CliUsageError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _OPTION_PARSERS:
            raise CliUsageError(
                f"{path}:{line_no}: unknown option {key!r}; "
                f"valid keys: {', '.join(sorted(_OPTION_PARSERS))}"
            )
        values[key] = value.strip()
    return values


class _Options:
    """Layered option lookup for one command invocation."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        config_path = getattr(args, "config", None) or os.environ.get("ATN_CONFIG")
        self.file_values = _load_config_file(config_path) if config_path else {}

    def get(self, name: str, default=None):
        flag = getattr(self.args, name, None)
        if flag is not None:
            return flag
        env = os.environ.get("ATN_" + name.upper())
        if env is not None:
            return _OPTION_PARSERS[name](env)
        if name in self.file_values:
            return _OPTION_PARSERS[name](self.file_values[name])
        return default


def _read_word_list(path: str) -> tuple[str, ...]:
    try:
        return load_word_list(path)
    except OSError as exc:
        raise CliDataError(f"cannot read lexicon {path}: {exc}") from None


def _normalizer_config(opts: _Options, lexicon_option: str = "lexicon") -> NormalizerConfig:
    passes = opts.get("passes")
    lexicon_path = opts.get(lexicon_option)
    try:
        return NormalizerConfig(
            interior_punct_threshold=opts.get("threshold", 2),
            url_detection=opts.get("url_detection", True),
            censor_lexicon=_read_word_list(lexicon_path) if lexicon_path else (),
            enabled_passes=tuple(passes) if passes is not None else PASS_ORDER,
        )
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None


def _resolve_seed(opts: _Options) -> int:
    seed = opts.get("seed")
    if seed is None:
        seed = secrets.randbits(32)
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _data_path(filename: str) -> Path:
    return Path(data_path(filename))


def _decode_lines(stream, warn_prefix: str):
    """Yield (line_no, text) from a binary stream, skipping undecodable
    lines with a stderr warning; the generator's .skipped attribute is
    consulted for the partial exit code."""
    for line_no, raw in enumerate(stream, start=1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            print(f"{warn_prefix}: line {line_no}: invalid UTF-8, skipped", file=sys.stderr)
            yield line_no, None
            continue
        yield line_no, text.rstrip("\n").rstrip("\r")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_normalize(opts: _Options) -> int:
    args = opts.args
    cfg = _normalizer_config(opts)
    norm = Normalizer(cfg)
    trace = bool(opts.get("trace", False))
    field = opts.get("field", "text")

    in_stream = None
    out_stream = sys.stdout
    try:
        if args.input is not None:
            in_stream = open(args.input, "rb")
        if args.output is not None:
            out_stream = open(args.output, "w", encoding="utf-8")

        skipped = 0
        source = in_stream if in_stream is not None else sys.stdin.buffer
        jsonl_mode = args.input is not None
        for line_no, text in _decode_lines(source, args.input or "<stdin>"):
            if text is None:
                skipped += 1
                continue
            if jsonl_mode:
                if not text.strip():
                    continue
                try:
                    record = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise CliDataError(
                        f"{args.input}:{line_no}: invalid JSON ({exc.msg})"
                    ) from None
                if not isinstance(record, dict) or not isinstance(record.get(field), str):
                    raise CliDataError(
                        f"{args.input}:{line_no}: no string field {field!r}"
                    )
                result = norm.normalize(record[field])
                record[field] = result.text
                if trace:
                    record["edits"] = [e.to_json() for e in result.edits]
                print(json.dumps(record, ensure_ascii=False), file=out_stream)
            else:
                result = norm.normalize(text)
                if trace:
                    print(
                        json.dumps(
                            {
                                "input": text,
                                "normalized": result.text,
                                "edits": [e.to_json() for e in result.edits],
                            },
                            ensure_ascii=False,
                        ),
                        file=out_stream,
                    )
                else:
                    print(result.text, file=out_stream)
        return EX_PARTIAL if skipped else EX_OK
    finally:
        if in_stream is not None:
            in_stream.close()
        if out_stream is not sys.stdout:
            out_stream.close()


def cmd_attack(opts: _Options) -> int:
    args = opts.args
    field = opts.get("field", "text")
    seed = _resolve_seed(opts)
    out_path = args.out if args.out is not None else args.input + ".attacked.jsonl"
    sidecar_path = args.input + ".attacks.jsonl"

    skipped = 0

    def records():
        nonlocal skipped
        with open(args.input, "rb") as fh:
            for line_no, text in _decode_lines(fh, args.input):
                if text is None:
                    skipped += 1
                    continue
                if not text.strip():
                    continue
                try:
                    record = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise CliDataError(
                        f"{args.input}:{line_no}: invalid JSON ({exc.msg})"
                    ) from None
                if not isinstance(record, dict):
                    raise CliDataError(f"{args.input}:{line_no}: line is not a JSON object")
                yield record

    try:
        with open(out_path, "w", encoding="utf-8") as out_fh, open(
            sidecar_path, "w", encoding="utf-8"
        ) as side_fh:
            for attacked, meta in attack_corpus(records(), args.kind, seed, field):
                print(json.dumps(attacked, ensure_ascii=False), file=out_fh)
                print(json.dumps(meta, ensure_ascii=False), file=side_fh)
    except KeyError as exc:
        raise CliDataError(f"{args.input}: {exc.args[0]}") from None
    return EX_PARTIAL if skipped else EX_OK


def _build_classifier(opts: _Options, task: str):
    spec = opts.get("classifier", "builtin")
    if spec == "builtin":
        if task != "binary":
            raise CliUsageError("the builtin classifier only supports binary datasets")
        lexicon_path = opts.get("lexicon")
        words = (
            _read_word_list(lexicon_path)
            if lexicon_path
            else _read_word_list(str(_data_path("demo_lexicon.txt")))
        )
        if not words:
            raise CliDataError("classifier lexicon is empty")
        return BuiltinClassifier(words)
    if spec.startswith(("http://", "https://")):
        return ExternalClassifier(spec, task=task)
    raise CliUsageError(f"classifier must be 'builtin' or an http(s) URL, got {spec!r}")


def _infer_schema(path: str, task: str) -> str:
    if path.endswith(".csv"):
        return "csv"
    return "nli_jsonl" if task == "nli" else "binary_jsonl"


def cmd_evaluate(opts: _Options) -> int:
    args = opts.args
    task = opts.get("task", "binary")
    if task not in ("binary", "nli"):
        raise CliUsageError(f"task must be 'binary' or 'nli', got {task!r}")
    attacks = opts.get("attacks", ["all"])
    if attacks == ["all"] or attacks == "all":
        attacks = list(ATTACK_KINDS)
    bad = [k for k in attacks if k not in ATTACK_KINDS]
    if bad:
        raise CliUsageError(f"unknown attack kind(s) {bad}; valid: {list(ATTACK_KINDS)}")
    fmt = opts.get("format", "json")
    if fmt not in ("csv", "markdown", "json"):
        raise CliUsageError(f"format must be csv, markdown or json, got {fmt!r}")
    threads = opts.get("threads", 1)
    attack_field = opts.get("attack_field", "hypothesis")
    seed = _resolve_seed(opts)
    cfg = _normalizer_config(opts, lexicon_option="censor_lexicon")
    classifier = _build_classifier(opts, task)

    dataset_paths = args.datasets if args.datasets else [str(_data_path("demo_corpus.jsonl"))]
    schema_flag = args.schema

    reports = []
    for path in dataset_paths:
        schema = schema_flag or _infer_schema(path, task)
        try:
            records = load_dataset(path, schema)
        except OSError as exc:
            raise CliDataError(f"cannot read dataset {path}: {exc}") from None
        if not records:
            raise CliDataError(f"{path}: dataset is empty")
        reports.append(
            run_matrix(
                records,
                attacks,
                classifier,
                normalizer_config=cfg,
                master_seed=seed,
                dataset=Path(path).stem,
                attack_field=attack_field,
                threads=threads,
            )
        )

    conditions = tuple(c for r in reports for c in r.conditions)
    config_hash = reports[0].config_hash
    if len(reports) > 1:
        import hashlib

        joined = ":".join(r.config_hash for r in reports).encode()
        config_hash = hashlib.sha256(joined).hexdigest()[:16]
    timestamp = (
        datetime.now(timezone.utc).isoformat(timespec="seconds")
        if opts.get("timestamps", False)
        else None
    )
    report = EvalReport(
        conditions=conditions,
        master_seed=seed,
        config_hash=config_hash,
        timestamp=timestamp,
    )

    print(format_summary(report))
    if args.out is not None:
        Path(args.out).write_bytes(emit_report(report, fmt))
        print(f"report written to {args.out}", file=sys.stderr)
    return EX_OK


def cmd_bench(opts: _Options) -> int:
    args = opts.args
    corpus_path = opts.get("corpus")
    if corpus_path:
        try:
            corpus = Path(corpus_path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise CliDataError(f"cannot read corpus {corpus_path}: {exc}") from None
    else:
        corpus = load_bench_corpus()
    if not corpus:
        raise CliDataError("bench corpus is empty")
    runs = opts.get("runs", 5)
    which = opts.get("backends", "both")
    from ._backend import available_backends, backend_name

    if which == "active":
        names = [backend_name()]
    elif which == "both":
        names = available_backends()
    elif which in ("pure", "compiled"):
        names = [which]
    else:
        raise CliUsageError(f"backends must be active, both, pure or compiled, got {which!r}")

    cfg = _normalizer_config(opts)
    print(f"corpus: {len(corpus)} texts, runs per backend: {runs}")
    for name in names:
        try:
            result = throughput_bench(corpus, cfg, runs=runs, backend=name)
        except ValueError as exc:
            raise CliUsageError(str(exc)) from None
        rates = ", ".join(f"{r:.0f}" for r in result.rates)
        print(
            f"{name:>9}: median {result.rate:.0f} texts/s "
            f"(runs: {rates}; mean length {result.mean_codepoints:.1f})"
        )
    return EX_OK


def cmd_serve(opts: _Options) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    lexicon_path = opts.get("lexicon")
    words = (
        _read_word_list(lexicon_path)
        if lexicon_path
        else _read_word_list(str(_data_path("demo_lexicon.txt")))
    )
    classifier_spec = opts.get("classifier", "builtin")
    if classifier_spec == "builtin":
        classifier = BuiltinClassifier(words)
    elif classifier_spec.startswith(("http://", "https://")):
        classifier = ExternalClassifier(classifier_spec)
    else:
        raise CliUsageError(
            f"classifier must be 'builtin' or an http(s) URL, got {classifier_spec!r}"
        )

    static = opts.get("static")
    config = ServiceConfig(
        normalizer_config=_normalizer_config(opts, lexicon_option="censor_lexicon"),
        classifier=classifier,
        static_dir=Path(static) if static else None,
        session_log_path=opts.get("session_log"),
    )
    app = create_app(config)
    uvicorn.run(app, host=opts.get("bind", "127.0.0.1"), port=opts.get("port", 8000))
    return EX_OK


# ---------------------------------------------------------------------------
# Parser assembly


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value option file")


def _add_normalizer_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--passes", type=_parse_list, default=None, metavar="LIST",
                     help=f"comma-separated subset of {','.join(PASS_ORDER)}; '' disables all")
    sub.add_argument("--threshold", type=int, default=None,
                     help="interior punctuation marks needed before a token is collapsed")
    sub.add_argument("--no-url-detection", dest="url_detection", action="store_const",
                     const=False, default=None, help="collapse URL-like tokens too")


def build_parser() -> _Parser:
    parser = _Parser(prog="atnorm", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = subs.add_parser("normalize", help="normalize stdin lines or a JSONL file",
                        parents=[], add_help=True)
    p.add_argument("--input", help="JSONL input path (default: plain-text stdin)")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--field", default=None, help="JSONL text field (default text)")
    p.add_argument("--trace", action="store_const", const=True, default=None,
                   help="emit JSONL with the edit trace")
    _add_normalizer_flags(p)
    p.add_argument("--lexicon", default=None, metavar="PATH",
                   help="censorship-decode word list, one word per line")
    _add_common(p)
    p.set_defaults(func=cmd_normalize)

    p = subs.add_parser("attack", help="attack a JSONL corpus, writing a sidecar of parameters")
    p.add_argument("--input", required=True, help="JSONL input path")
    p.add_argument("--kind", required=True, choices=ATTACK_KINDS, metavar="KIND",
                   help="one of: " + ", ".join(ATTACK_KINDS))
    p.add_argument("--seed", type=int, default=None, help="master seed (default: from entropy)")
    p.add_argument("--field", default=None,
                   help="field to attack: text, premise, hypothesis or both")
    p.add_argument("--out", default=None,
                   help="output path (default: INPUT.attacked.jsonl)")
    _add_common(p)
    p.set_defaults(func=cmd_attack)

    p = subs.add_parser("evaluate", help="run the attack/normalize/score matrix")
    p.add_argument("--datasets", nargs="+", default=None, metavar="PATH",
                   help="dataset files (default: the shipped demo corpus)")
    p.add_argument("--schema", choices=("binary_jsonl", "nli_jsonl", "csv"), default=None)
    p.add_argument("--task", default=None, help="binary (default) or nli")
    p.add_argument("--attacks", type=_parse_list, default=None, metavar="LIST",
                   help="comma-separated attack kinds, or 'all'")
    p.add_argument("--classifier", default=None, help="'builtin' or an http(s) endpoint URL")
    p.add_argument("--lexicon", default=None, metavar="PATH",
                   help="builtin classifier word list (default: shipped demo lexicon)")
    p.add_argument("--censor-lexicon", dest="censor_lexicon", default=None, metavar="PATH",
                   help="censorship-decode word list for the normalizer (default: none)")
    p.add_argument("--seed", type=int, default=None, help="master seed (default: from entropy)")
    p.add_argument("--attack-field", dest="attack_field", default=None,
                   help="NLI field to attack: hypothesis (default) or premise")
    p.add_argument("--threads", type=int, default=None, help="scoring threads per condition")
    p.add_argument("--out", default=None, help="report output path")
    p.add_argument("--format", default=None, help="report format: json (default), csv, markdown")
    p.add_argument("--timestamps", action="store_const", const=True, default=None,
                   help="stamp the report provenance (off by default for byte-stable output)")
    _add_normalizer_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("bench", help="normalization throughput benchmark")
    p.add_argument("--corpus", default=None, help="text file, one text per line")
    p.add_argument("--runs", type=int, default=None, help="timed runs per backend (default 5)")
    p.add_argument("--backends", default=None,
                   help="active, both (default), pure or compiled")
    _add_normalizer_flags(p)
    p.add_argument("--lexicon", default=None, metavar="PATH",
                   help="censorship-decode word list")
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = subs.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--port", type=int, default=None, help="listen port (default 8000)")
    p.add_argument("--bind", default=None, help="listen address (default 127.0.0.1)")
    p.add_argument("--classifier", default=None, help="'builtin' or an http(s) endpoint URL")
    p.add_argument("--lexicon", default=None, metavar="PATH",
                   help="builtin classifier word list (default: shipped demo lexicon)")
    p.add_argument("--censor-lexicon", dest="censor_lexicon", default=None, metavar="PATH",
                   help="censorship-decode word list for the normalizer")
    p.add_argument("--static", default=None, help="directory of playground assets to serve")
    p.add_argument("--session-log", dest="session_log", default=None,
                   help="JSONL file for append-only session persistence")
    _add_normalizer_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) is None:
            parser.print_usage(sys.stderr)
            return EX_USAGE
        opts = _Options(args)
        return args.func(opts)
    except CliUsageError as exc:
        print(f"atnorm: {exc}", file=sys.stderr)
        return EX_USAGE
    except (CliDataError, DatasetError, TableError) as exc:
        print(f"atnorm: {exc}", file=sys.stderr)
        return EX_DATA
    except ConditionAbortedError as exc:
        print(f"atnorm: {exc}", file=sys.stderr)
        return EX_UNAVAILABLE
    except BrokenPipeError:
        return EX_OK
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
