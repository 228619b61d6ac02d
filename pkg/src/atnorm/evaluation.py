"""Evaluation harness: dataset loading, the condition matrix, reports,
and the normalization throughput benchmark.

A matrix run scores one classifier over a grid of conditions: the raw
corpus, the normalized corpus, and for every requested attack kind the
attacked corpus plus its normalized repair.  Per-record attack seeds are
derived from (master seed, record index, kind), so thread counts and
condition order can never change a number.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .attacks import ATTACK_KINDS, AttackSpec, apply_attack, derive_seed, sample_params
from .normalizer import Normalizer, NormalizerConfig

__all__ = [
    "EvalRecord",
    "ConditionResult",
    "EvalReport",
    "DatasetError",
    "ConditionAbortedError",
    "BINARY_LABEL_ALIASES",
    "NLI_LABEL_ALIASES",
    "load_dataset",
    "run_matrix",
    "emit_report",
    "load_report",
    "format_summary",
    "BenchResult",
    "throughput_bench",
    "load_bench_corpus",
]

BINARY_LABEL_ALIASES = {
    "positive": "positive",
    "hate": "positive",
    "1": "positive",
    "negative": "negative",
    "nothate": "negative",
    "0": "negative",
}

NLI_LABEL_ALIASES = {
    "entailment": "entailment",
    "e": "entailment",
    "neutral": "neutral",
    "n": "neutral",
    "contradiction": "contradiction",
    "c": "contradiction",
}

DATASET_SCHEMAS = ("binary_jsonl", "nli_jsonl", "csv")

# Failure budget per condition: abort only when more than this fraction of
# records cannot be scored (external endpoints flake; a few losses are fine).
FAILURE_BUDGET = 0.10


class DatasetError(ValueError):
    """Malformed dataset file; message carries the path and line number."""


class ConditionAbortedError(RuntimeError):
    """Raised when a condition loses more than the failure budget."""

    def __init__(self, condition: str, errors: list):
        self.condition = condition
        self.errors = errors
        sample = "; ".join(f"{rid}: {exc}" for rid, exc in errors[:3])
        super().__init__(
            f"condition {condition} aborted: {len(errors)} records failed ({sample})"
        )


@dataclass(frozen=True)
class EvalRecord:
    id: str
    task: str  # "binary" or "nli"
    gold_label: str
    text: str | None = None
    premise: str | None = None
    hypothesis: str | None = None

    def __post_init__(self):
        if self.task == "binary":
            if self.text is None or self.premise is not None or self.hypothesis is not None:
                raise ValueError(f"record {self.id!r}: binary records carry text only")
            if self.gold_label not in ("positive", "negative"):
                raise ValueError(f"record {self.id!r}: bad binary label {self.gold_label!r}")
        elif self.task == "nli":
            if self.text is not None or self.premise is None or self.hypothesis is None:
                raise ValueError(
                    f"record {self.id!r}: nli records carry premise and hypothesis only"
                )
            if self.gold_label not in ("entailment", "neutral", "contradiction"):
                raise ValueError(f"record {self.id!r}: bad nli label {self.gold_label!r}")
        else:
            raise ValueError(f"record {self.id!r}: unknown task {self.task!r}")


def _canon_label(raw, task: str, where: str) -> str:
    aliases = BINARY_LABEL_ALIASES if task == "binary" else NLI_LABEL_ALIASES
    label = aliases.get(str(raw).strip().casefold())
    if label is None:
        raise DatasetError(f"{where}: unknown {task} label {raw!r}")
    return label


def _require(obj: dict, key: str, where: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise DatasetError(f"{where}: missing or non-string field {key!r}")
    return value


def load_dataset(path: str, schema: str) -> list[EvalRecord]:
    """Parse one file into validated records, preserving file order."""
    if schema not in DATASET_SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}; valid: {list(DATASET_SCHEMAS)}")
    records: list[EvalRecord] = []
    with open(path, encoding="utf-8") as fh:
        if schema == "csv":
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            if "text" in header:
                task, fields = "binary", ("id", "text", "label")
            elif "premise" in header and "hypothesis" in header:
                task, fields = "nli", ("id", "premise", "hypothesis", "label")
            else:
                raise DatasetError(f"{path}:1: header must name text or premise+hypothesis")
            missing = [f for f in fields if f not in header]
            if missing:
                raise DatasetError(f"{path}:1: header missing columns {missing}")
            for line_no, row in enumerate(reader, start=2):
                where = f"{path}:{line_no}"
                for f in fields:
                    if row.get(f) is None:
                        raise DatasetError(f"{where}: missing field {f!r}")
                gold = _canon_label(row["label"], task, where)
                try:
                    if task == "binary":
                        records.append(EvalRecord(row["id"], task, gold, text=row["text"]))
                    else:
                        records.append(
                            EvalRecord(
                                row["id"], task, gold,
                                premise=row["premise"], hypothesis=row["hypothesis"],
                            )
                        )
                except ValueError as exc:
                    raise DatasetError(f"{where}: {exc}") from None
            return records
        task = "binary" if schema == "binary_jsonl" else "nli"
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{line_no}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{where}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise DatasetError(f"{where}: line is not a JSON object")
            rid = obj.get("id")
            if not isinstance(rid, str) or not rid:
                raise DatasetError(f"{where}: missing or non-string field 'id'")
            gold = _canon_label(obj.get("label"), task, where)
            try:
                if task == "binary":
                    records.append(
                        EvalRecord(rid, task, gold, text=_require(obj, "text", where))
                    )
                else:
                    records.append(
                        EvalRecord(
                            rid, task, gold,
                            premise=_require(obj, "premise", where),
                            hypothesis=_require(obj, "hypothesis", where),
                        )
                    )
            except ValueError as exc:
                raise DatasetError(f"{where}: {exc}") from None
    return records


@dataclass(frozen=True)
class ConditionResult:
    dataset: str
    augmentation: str  # attack kind or "baseline"
    normalized: bool
    classifier: str
    metric: float  # accuracy, correct / n exactly
    n: int
    failed: int = 0

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "augmentation": self.augmentation,
            "normalized": self.normalized,
            "classifier": self.classifier,
            "metric": self.metric,
            "n": self.n,
            "failed": self.failed,
        }

    @staticmethod
    def from_json(obj: dict) -> "ConditionResult":
        return ConditionResult(
            dataset=obj["dataset"],
            augmentation=obj["augmentation"],
            normalized=bool(obj["normalized"]),
            classifier=obj["classifier"],
            metric=float(obj["metric"]),
            n=int(obj["n"]),
            failed=int(obj.get("failed", 0)),
        )


@dataclass(frozen=True)
class EvalReport:
    conditions: tuple[ConditionResult, ...]
    master_seed: int
    config_hash: str
    timestamp: str | None = None  # opt-in; None keeps reports byte-stable

    def __post_init__(self):
        object.__setattr__(self, "conditions", tuple(self.conditions))

    def to_json(self) -> dict:
        return {
            "provenance": {
                "master_seed": self.master_seed,
                "config_hash": self.config_hash,
                "timestamp": self.timestamp,
            },
            "conditions": [c.to_json() for c in self.conditions],
        }

    @staticmethod
    def from_json(obj: dict) -> "EvalReport":
        prov = obj["provenance"]
        return EvalReport(
            conditions=tuple(ConditionResult.from_json(c) for c in obj["conditions"]),
            master_seed=prov["master_seed"],
            config_hash=prov["config_hash"],
            timestamp=prov.get("timestamp"),
        )


def _config_fingerprint(
    records: list[EvalRecord],
    attacks,
    classifier,
    cfg: NormalizerConfig,
    dataset: str,
    attack_field: str,
) -> str:
    ids = hashlib.sha256(
        "\n".join(f"{r.id}\t{r.gold_label}" for r in records).encode()
    ).hexdigest()
    snapshot = {
        "dataset": dataset,
        "records": ids,
        "attacks": list(attacks),
        "attack_field": attack_field,
        "classifier": {"name": classifier.name, "task": classifier.task},
        "normalizer": {
            "passes": list(cfg.ordered_passes),
            "threshold": cfg.interior_punct_threshold,
            "url_detection": cfg.url_detection,
            "censor_lexicon": sorted(cfg.censor_lexicon),
            "tables": [f"{t.name}:{t.version}" for t in cfg.resolved_tables],
        },
    }
    blob = json.dumps(snapshot, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _classifier_input(record: EvalRecord, text_value: str, attack_field: str) -> dict:
    if record.task == "binary":
        return {"id": record.id, "text": text_value}
    if attack_field == "premise":
        return {"id": record.id, "premise": text_value, "hypothesis": record.hypothesis}
    return {"id": record.id, "premise": record.premise, "hypothesis": text_value}


def _score_condition(
    classifier, records, texts, attack_field: str, condition: str, threads: int
) -> tuple[float, int, int]:
    """Returns (metric, scored count, failed count)."""

    def one(pair):
        record, text_value = pair
        try:
            return classifier.score(_classifier_input(record, text_value, attack_field))
        except Exception as exc:  # per-record isolation; budget enforced below
            return exc

    pairs = list(zip(records, texts))
    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one, pairs))
    else:
        outcomes = [one(p) for p in pairs]

    errors = [
        (rec.id, out) for (rec, _), out in zip(pairs, outcomes) if isinstance(out, Exception)
    ]
    if len(errors) > FAILURE_BUDGET * len(pairs):
        raise ConditionAbortedError(condition, errors)
    correct = 0
    scored = 0
    for (rec, _), out in zip(pairs, outcomes):
        if isinstance(out, Exception):
            continue
        scored += 1
        if out.label == rec.gold_label:
            correct += 1
    metric = correct / scored if scored else 0.0
    return metric, scored, len(errors)


def run_matrix(
    records,
    attacks,
    classifier,
    normalizer_config: NormalizerConfig | None = None,
    master_seed: int = 0,
    dataset: str = "dataset",
    attack_field: str = "hypothesis",
    threads: int = 1,
) -> EvalReport:
    """Score the (augmentation, normalized) grid; see the module docstring.

    ``attack_field`` only matters for NLI records ("premise" or
    "hypothesis"); binary records always attack their text.
    """
    records = list(records)
    if not records:
        raise ValueError("run_matrix needs at least one record")
    tasks = {r.task for r in records}
    if len(tasks) > 1:
        raise ValueError(f"records mix tasks {sorted(tasks)}")
    task = tasks.pop()
    if classifier.task != task:
        raise ValueError(
            f"classifier {classifier.name!r} handles {classifier.task}, records are {task}"
        )
    if attack_field not in ("premise", "hypothesis"):
        raise ValueError("attack_field must be 'premise' or 'hypothesis'")
    for kind in attacks:
        if kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack kind {kind!r}; valid: {list(ATTACK_KINDS)}")

    cfg = normalizer_config if normalizer_config is not None else NormalizerConfig()
    norm = Normalizer(cfg)
    if task == "binary":
        originals = [r.text for r in records]
    else:
        originals = [getattr(r, attack_field) for r in records]

    fingerprint = _config_fingerprint(records, attacks, classifier, cfg, dataset, attack_field)

    conditions: list[ConditionResult] = []

    def add(augmentation: str, normalized: bool, texts):
        tag = f"{dataset}/{augmentation}/{'normalized' if normalized else 'augmented'}"
        metric, n, failed = _score_condition(
            classifier, records, texts, attack_field, tag, threads
        )
        conditions.append(
            ConditionResult(
                dataset=dataset,
                augmentation=augmentation,
                normalized=normalized,
                classifier=classifier.name,
                metric=metric,
                n=n,
                failed=failed,
            )
        )

    add("baseline", False, originals)
    add("baseline", True, [norm.normalize(t).text for t in originals])
    for kind in attacks:
        attacked = [
            _attack_text(original, kind, derive_seed(master_seed, index, kind))
            for index, original in enumerate(originals)
        ]
        add(kind, False, attacked)
        add(kind, True, [norm.normalize(t).text for t in attacked])

    return EvalReport(
        conditions=tuple(conditions),
        master_seed=master_seed,
        config_hash=fingerprint,
    )


def _attack_text(text: str, kind: str, seed: int) -> str:
    return apply_attack(text, AttackSpec(kind, sample_params(seed), seed))


# ---------------------------------------------------------------------------
# Report emission


def _fmt_row(c: ConditionResult) -> list[str]:
    return [
        c.dataset,
        c.classifier,
        c.augmentation,
        "yes" if c.normalized else "no",
        f"{c.metric:.2f}",
        str(c.n),
        str(c.failed),
    ]


_TABLE_HEADER = ["dataset", "classifier", "augmentation", "normalized", "accuracy", "n", "failed"]


def emit_report(report: EvalReport, format: str) -> bytes:
    """Serialize a report; csv and markdown round metrics to 2 decimals,
    json keeps full precision so it reloads without loss."""
    if format == "json":
        return (json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n").encode()
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_TABLE_HEADER)
        for c in report.conditions:
            writer.writerow(_fmt_row(c))
        return buf.getvalue().encode()
    if format == "markdown":
        lines = [
            "| " + " | ".join(_TABLE_HEADER) + " |",
            "|" + "|".join(" --- " for _ in _TABLE_HEADER) + "|",
        ]
        for c in report.conditions:
            lines.append("| " + " | ".join(_fmt_row(c)) + " |")
        lines.append("")
        lines.append(
            f"master_seed: {report.master_seed}  config_hash: {report.config_hash}"
            + (f"  timestamp: {report.timestamp}" if report.timestamp else "")
        )
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown report format {format!r}; valid: ['csv', 'markdown', 'json']")


def load_report(data: bytes) -> EvalReport:
    """Inverse of emit_report(format='json')."""
    return EvalReport.from_json(json.loads(data.decode()))


def format_summary(report: EvalReport) -> str:
    """Per-attack baseline/augmented/normalized triplets, one line each."""
    by_key: dict[tuple[str, str], dict[tuple[str, bool], ConditionResult]] = {}
    order: list[tuple[str, str]] = []
    kinds: dict[tuple[str, str], list[str]] = {}
    for c in report.conditions:
        key = (c.dataset, c.classifier)
        if key not in by_key:
            by_key[key] = {}
            kinds[key] = []
            order.append(key)
        by_key[key][(c.augmentation, c.normalized)] = c
        if c.augmentation != "baseline" and c.augmentation not in kinds[key]:
            kinds[key].append(c.augmentation)
    lines: list[str] = []
    for key in order:
        dataset, classifier = key
        grid = by_key[key]
        base = grid.get(("baseline", False))
        base_norm = grid.get(("baseline", True))
        lines.append(f"{dataset} / {classifier}")
        if base is not None and base_norm is not None:
            lines.append(
                f"  {'baseline':<28} raw={base.metric:.2f}"
                f"  normalized={base_norm.metric:.2f}  (n={base.n})"
            )
        for kind in kinds[key]:
            aug = grid.get((kind, False))
            ren = grid.get((kind, True))
            if aug is None or ren is None:
                continue
            base_txt = f"{base.metric:.2f}" if base is not None else "?"
            lines.append(
                f"  {kind:<28} baseline={base_txt}"
                f"  augmented={aug.metric:.2f}  normalized={ren.metric:.2f}"
            )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Throughput benchmark


@dataclass(frozen=True)
class BenchResult:
    backend: str
    n_texts: int
    mean_codepoints: float
    rates: tuple[float, ...]  # texts per second, one entry per run
    rate: float = field(init=False)  # median of rates

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(self.rates))
        object.__setattr__(self, "rate", statistics.median(self.rates))


def throughput_bench(
    corpus,
    normalizer_config: NormalizerConfig | None = None,
    runs: int = 5,
    backend: str | None = None,
) -> BenchResult:
    """Single-threaded wall-clock rate over the corpus, median of ``runs``."""
    corpus = list(corpus)
    if not corpus:
        raise ValueError("bench corpus is empty")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    norm = Normalizer(normalizer_config, backend=backend)
    for text in corpus[:100]:  # warm caches and table structures
        norm.normalize(text)
    rates = []
    for _ in range(runs):
        started = time.perf_counter()
        for text in corpus:
            norm.normalize(text)
        elapsed = max(time.perf_counter() - started, 1e-9)
        rates.append(len(corpus) / elapsed)
    from ._backend import backend_name

    return BenchResult(
        backend=backend if backend is not None else backend_name(),
        n_texts=len(corpus),
        mean_codepoints=statistics.fmean(len(t) for t in corpus),
        rates=tuple(rates),
    )


def load_bench_corpus() -> list[str]:
    """The shipped benchmark corpus, one text per line."""
    data = (resources.files("atnorm") / "data" / "bench_corpus.txt").read_text("utf-8")
    return data.splitlines()
