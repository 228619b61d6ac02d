"""Builtin lexicon scorer semantics and the external HTTP client's
retry/terminal error split, exercised against an in-process mock transport."""

from __future__ import annotations

import json

import httpx
import pytest

from atnorm.classifiers import (
    BuiltinClassifier,
    ExternalClassifier,
    Prediction,
    RetriableClassifierError,
    TerminalClassifierError,
    score_builtin,
)

URL = "http://scorer.test/score"


def make_client(handler) -> httpx.Client:
    return httpx.Client(transport=httpx.MockTransport(handler))


def external(handler, **kwargs) -> ExternalClassifier:
    kwargs.setdefault("backoff", 0.0)
    return ExternalClassifier(URL, client=make_client(handler), **kwargs)


class TestBuiltin:
    def test_single_hit_is_positive_at_half(self):
        assert score_builtin("I will kill you", {"kill"}) == Prediction("positive", 0.5)

    def test_zero_width_break_defeats_the_matcher(self):
        assert score_builtin("k​ill them", {"kill"}).label == "negative"

    def test_clean_miss(self):
        assert score_builtin("hello world", {"kill"}) == Prediction("negative", 0.0)

    def test_punctuation_delimits_tokens(self):
        assert score_builtin("kill.", {"kill"}).label == "positive"
        assert score_builtin("(kill)", {"kill"}).label == "positive"

    def test_score_caps_at_one(self):
        assert score_builtin("kill kill kill", {"kill"}) == Prediction("positive", 1.0)

    def test_casefold_both_sides(self):
        assert score_builtin("KILL!", {"Kill"}).label == "positive"

    def test_adapter_and_prediction_json(self):
        clf = BuiltinClassifier(["KILL"], name="demo")
        assert (clf.task, clf.name) == ("binary", "demo")
        preds = clf.score_many([{"id": 1, "text": "kill"}, {"id": 2, "text": "ok"}])
        assert [p.label for p in preds] == ["positive", "negative"]
        assert preds[0].to_json() == {"label": "positive", "score": 0.5}
        nli = Prediction("neutral", (0.2, 0.5, 0.3))
        assert nli.to_json() == {"label": "neutral", "score": [0.2, 0.5, 0.3]}


class TestExternalBinary:
    def test_success(self):
        def handler(request: httpx.Request) -> httpx.Response:
            body = json.loads(request.content)
            assert set(body) == {"id", "text"}
            return httpx.Response(200, json={"id": body["id"], "label": "positive", "score": 0.9})

        pred = external(handler).score({"id": "a", "text": "whatever"})
        assert pred == Prediction("positive", 0.9)

    def test_label_inferred_from_score(self):
        def handler(request):
            body = json.loads(request.content)
            return httpx.Response(200, json={"id": body["id"], "score": body["text"] == "bad" and 0.6 or 0.5})

        clf = external(handler)
        assert clf.score({"id": 1, "text": "bad"}).label == "positive"
        assert clf.score({"id": 2, "text": "meh"}).label == "negative"

    def test_id_mismatch_is_terminal(self):
        handler = lambda request: httpx.Response(200, json={"id": "other", "score": 0.1})
        with pytest.raises(TerminalClassifierError, match="does not match"):
            external(handler).score({"id": "a", "text": "x"})

    def test_client_error_is_terminal_without_retry(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(422, text="nope")

        with pytest.raises(TerminalClassifierError, match="422"):
            external(handler).score({"id": "a", "text": "x"})
        assert len(calls) == 1

    def test_server_error_retries_then_succeeds(self):
        calls = []

        def handler(request):
            calls.append(1)
            if len(calls) < 3:
                return httpx.Response(503)
            return httpx.Response(200, json={"id": "a", "label": "negative", "score": 0.0})

        assert external(handler).score({"id": "a", "text": "x"}).label == "negative"
        assert len(calls) == 3

    def test_server_error_exhausts_budget(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(500)

        with pytest.raises(RetriableClassifierError, match="500"):
            external(handler, max_attempts=4).score({"id": "a", "text": "x"})
        assert len(calls) == 4

    def test_transport_failure_is_retriable(self):
        def handler(request):
            raise httpx.ConnectError("refused")

        with pytest.raises(RetriableClassifierError, match="transport"):
            external(handler).score({"id": "a", "text": "x"})

    def test_non_json_and_bad_score_are_terminal(self):
        with pytest.raises(TerminalClassifierError, match="non-JSON"):
            external(lambda r: httpx.Response(200, text="<html>")).score({"id": 1, "text": "x"})
        with pytest.raises(TerminalClassifierError, match="score"):
            external(lambda r: httpx.Response(200, json={"id": 1, "score": 1.5})).score(
                {"id": 1, "text": "x"}
            )

    def test_score_many_preserves_request_order(self):
        def handler(request):
            body = json.loads(request.content)
            return httpx.Response(200, json={"id": body["id"], "score": body["id"] / 100})

        records = [{"id": i, "text": f"t{i}"} for i in range(20)]
        preds = external(handler, concurrency=4).score_many(records)
        assert [p.score for p in preds] == [i / 100 for i in range(20)]


class TestExternalNli:
    @staticmethod
    def echo(dist, label=None):
        def handler(request):
            body = json.loads(request.content)
            assert set(body) == {"id", "premise", "hypothesis"}
            reply = {"id": body["id"], "score": dist}
            if label is not None:
                reply["label"] = label
            return httpx.Response(200, json=reply)

        return handler

    RECORD = {"id": "n1", "premise": "a cat sat", "hypothesis": "a cat exists"}

    def test_distribution_and_argmax(self):
        pred = external(self.echo([0.2, 0.5, 0.3]), task="nli").score(self.RECORD)
        assert pred == Prediction("neutral", (0.2, 0.5, 0.3))

    def test_ties_never_resolve_to_entailment(self):
        third = 1 / 3
        pred = external(self.echo([third, third, third]), task="nli").score(self.RECORD)
        assert pred.label == "neutral"
        pred = external(self.echo([0.4, 0.2, 0.4]), task="nli").score(self.RECORD)
        assert pred.label == "contradiction"

    def test_distribution_must_sum_to_one(self):
        with pytest.raises(TerminalClassifierError, match="sums to"):
            external(self.echo([0.5, 0.4, 0.3]), task="nli").score(self.RECORD)

    def test_distribution_must_have_three_entries(self):
        with pytest.raises(TerminalClassifierError, match="distribution"):
            external(self.echo([0.5, 0.5]), task="nli").score(self.RECORD)

    def test_explicit_label_validated(self):
        with pytest.raises(TerminalClassifierError, match="label"):
            external(self.echo([0.2, 0.5, 0.3], label="maybe"), task="nli").score(self.RECORD)

    def test_task_validation(self):
        with pytest.raises(ValueError, match="task"):
            ExternalClassifier(URL, task="regression")
