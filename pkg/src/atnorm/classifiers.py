"""Classifier surfaces for the evaluation harness.

The builtin classifier is a deliberately transparent lexicon matcher so
tests can compute expected metrics by hand.  The external client speaks a
small JSON wire format and separates retriable transport trouble from
terminal protocol errors.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from .chardata import CharClassSet, builtin_char_classes

__all__ = [
    "Prediction",
    "BuiltinClassifier",
    "score_builtin",
    "ExternalClassifier",
    "ExternalClassifierError",
    "RetriableClassifierError",
    "TerminalClassifierError",
    "BINARY_LABELS",
    "NLI_LABELS",
]

log = logging.getLogger("atnorm.classifiers")

BINARY_LABELS = ("positive", "negative")
NLI_LABELS = ("entailment", "neutral", "contradiction")


@dataclass(frozen=True)
class Prediction:
    """``score`` is a probability for binary tasks and a 3-tuple
    (entailment, neutral, contradiction) for NLI."""

    label: str
    score: float | tuple[float, float, float]

    def to_json(self) -> dict:
        score = list(self.score) if isinstance(self.score, tuple) else self.score
        return {"label": self.label, "score": score}


def _tokenize(text: str, classes: CharClassSet) -> list[str]:
    """Case-folded tokens split on whitespace and punctuation."""
    tokens: list[str] = []
    current: list[str] = []
    ws = classes.whitespace
    punct = classes.punctuation
    for ch in text:
        if ch in ws or ch in punct:
            if current:
                tokens.append("".join(current))
                current = []
        else:
            current.append(ch)
    if current:
        tokens.append("".join(current))
    return [t.casefold() for t in tokens]


def score_builtin(
    text: str, lexicon, classes: CharClassSet | None = None
) -> Prediction:
    """Positive iff any lexicon word appears as a delimited token.

    The score is min(1, hits / 2): one hit lands exactly on 0.5 and is
    labeled positive (hits decide the label, not a threshold).
    """
    classes = classes if classes is not None else builtin_char_classes()
    lex = {w.casefold() for w in lexicon}
    hits = sum(1 for tok in _tokenize(text, classes) if tok in lex)
    return Prediction(
        label="positive" if hits >= 1 else "negative",
        score=min(1.0, hits / 2),
    )


class BuiltinClassifier:
    """Harness adapter around :func:`score_builtin`."""

    task = "binary"

    def __init__(self, lexicon, name: str = "builtin"):
        self.lexicon = frozenset(w.casefold() for w in lexicon)
        self.name = name
        self._classes = builtin_char_classes()

    def score(self, record: dict) -> Prediction:
        return score_builtin(record["text"], self.lexicon, self._classes)

    def score_many(self, records) -> list[Prediction]:
        return [self.score(r) for r in records]


class ExternalClassifierError(Exception):
    """Base class for external-classifier failures."""


class RetriableClassifierError(ExternalClassifierError):
    """Transport failures and 5xx responses; safe to retry."""


class TerminalClassifierError(ExternalClassifierError):
    """4xx responses and schema violations; retrying cannot help."""


def _argmax_nli(dist: tuple[float, float, float]) -> str:
    # Ties break toward neutral, then contradiction; never toward entailment.
    order = (1, 2, 0)  # neutral, contradiction, entailment
    best = max(order, key=lambda i: (dist[i], -order.index(i)))
    return NLI_LABELS[best]


class ExternalClassifier:
    """HTTP client for a remote scorer.

    Wire format: POST {"id", "text"} (binary) or {"id", "premise",
    "hypothesis"} (NLI); the endpoint answers {"id", "label", "score"}.
    Responses are matched to requests by id, never by order.
    """

    def __init__(
        self,
        url: str,
        task: str = "binary",
        name: str | None = None,
        timeout: float = 10.0,
        max_attempts: int = 3,
        backoff: float = 0.2,
        concurrency: int = 8,
        client: httpx.Client | None = None,
    ):
        if task not in ("binary", "nli"):
            raise ValueError("task must be 'binary' or 'nli'")
        self.url = url
        self.task = task
        self.name = name if name is not None else httpx.URL(url).host or url
        self.max_attempts = max(1, max_attempts)
        self.backoff = backoff
        self.concurrency = max(1, concurrency)
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def _payload(self, record: dict) -> dict:
        if self.task == "binary":
            return {"id": record["id"], "text": record["text"]}
        return {
            "id": record["id"],
            "premise": record["premise"],
            "hypothesis": record["hypothesis"],
        }

    def _parse(self, record: dict, body: dict) -> Prediction:
        if not isinstance(body, dict):
            raise TerminalClassifierError(f"response for {record['id']!r} is not an object")
        if body.get("id") != record["id"]:
            raise TerminalClassifierError(
                f"response id {body.get('id')!r} does not match request id {record['id']!r}"
            )
        score = body.get("score")
        label = body.get("label")
        if self.task == "binary":
            if not isinstance(score, (int, float)) or not 0.0 <= float(score) <= 1.0:
                raise TerminalClassifierError(f"bad binary score {score!r}")
            score = float(score)
            if label is None:
                label = "positive" if score > 0.5 else "negative"
            if label not in BINARY_LABELS:
                raise TerminalClassifierError(f"bad binary label {label!r}")
            return Prediction(label=label, score=score)
        if (
            not isinstance(score, (list, tuple))
            or len(score) != 3
            or not all(isinstance(v, (int, float)) for v in score)
        ):
            raise TerminalClassifierError(f"bad NLI distribution {score!r}")
        dist = tuple(float(v) for v in score)
        if abs(sum(dist) - 1.0) > 1e-9:
            raise TerminalClassifierError(f"NLI distribution sums to {sum(dist)!r}, not 1")
        if label is None:
            label = _argmax_nli(dist)
        if label not in NLI_LABELS:
            raise TerminalClassifierError(f"bad NLI label {label!r}")
        return Prediction(label=label, score=dist)

    def score(self, record: dict) -> Prediction:
        payload = self._payload(record)
        last_error: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            started = time.perf_counter()
            try:
                response = self._client.post(self.url, json=payload)
            except httpx.HTTPError as exc:
                last_error = RetriableClassifierError(f"transport failure: {exc}")
            else:
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                log.debug(
                    "scored id=%r status=%s latency=%.1fms attempt=%d",
                    record.get("id"), response.status_code, elapsed_ms, attempt,
                )
                if response.status_code >= 500:
                    last_error = RetriableClassifierError(
                        f"server error {response.status_code}"
                    )
                elif response.status_code >= 400:
                    raise TerminalClassifierError(
                        f"client error {response.status_code}: {response.text[:200]}"
                    )
                else:
                    try:
                        body = response.json()
                    except ValueError as exc:
                        raise TerminalClassifierError(f"non-JSON response: {exc}") from None
                    return self._parse(record, body)
            if attempt < self.max_attempts:
                time.sleep(self.backoff * attempt)
        raise last_error if last_error is not None else RetriableClassifierError("no attempts")

    def score_many(self, records) -> list[Prediction]:
        records = list(records)
        if len(records) <= 1 or self.concurrency == 1:
            return [self.score(r) for r in records]
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            return list(pool.map(self.score, records))
