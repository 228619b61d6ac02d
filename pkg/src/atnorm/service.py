"""HTTP JSON API over the normalizer, attack generator and classifier.

All handler state is immutable after startup except the session store,
which only ever appends under a lock.  Request bodies are parsed by hand
so malformed JSON maps to 400 and an oversize body to 413 before any
model of the payload is built.
"""

from __future__ import annotations

import json
import secrets
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .attacks import ATTACK_KINDS, AttackParams, AttackSpec, apply_attack, sample_params
from .classifiers import (
    BuiltinClassifier,
    RetriableClassifierError,
    TerminalClassifierError,
)
from .normalizer import PASS_ORDER, Normalizer, NormalizerConfig

__all__ = ["ServiceConfig", "SessionStore", "create_app", "canonical_json", "MAX_BODY_BYTES"]

MAX_BODY_BYTES = 64 * 1024


def canonical_json(obj) -> str:
    """Stable serialization shared with session exports."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class ServiceConfig:
    normalizer_config: NormalizerConfig = field(default_factory=NormalizerConfig)
    classifier: object | None = None  # None = builtin over the shipped demo lexicon
    max_sessions: int = 200
    max_attempts_per_session: int = 500
    session_log_path: str | None = None
    static_dir: Path | None = None
    cors_origins: tuple[str, ...] = ("*",)


class SessionStore:
    """Append-only in-memory attempt log with optional JSONL persistence."""

    def __init__(self, max_sessions: int, max_attempts: int, log_path: str | None):
        self._sessions: dict[str, list[dict]] = {}
        self._order: list[str] = []
        self._lock = threading.Lock()
        self._max_sessions = max_sessions
        self._max_attempts = max_attempts
        self._log_path = log_path

    def append(self, session_id: str, attempt: dict) -> dict | None:
        """Store the attempt with its sequence number; returns the stored
        record, or None when the session is at capacity."""
        with self._lock:
            log = self._sessions.get(session_id)
            if log is None:
                if len(self._order) >= self._max_sessions:
                    oldest = self._order.pop(0)
                    del self._sessions[oldest]
                log = self._sessions[session_id] = []
                self._order.append(session_id)
            if len(log) >= self._max_attempts:
                return None
            record = {"seq": len(log), "session_id": session_id, **attempt}
            log.append(record)
            if self._log_path:
                with open(self._log_path, "a", encoding="utf-8") as fh:
                    fh.write(canonical_json(record) + "\n")
            return record

    def get(self, session_id: str) -> list[dict] | None:
        with self._lock:
            log = self._sessions.get(session_id)
            return list(log) if log is not None else None


def _error(status_code: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status_code)


async def _read_json_object(request: Request) -> tuple[dict | None, JSONResponse | None]:
    body = await request.body()
    if len(body) > MAX_BODY_BYTES:
        return None, _error(413, f"body exceeds {MAX_BODY_BYTES} bytes")
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        return None, _error(400, "body must be a UTF-8 JSON object")
    if not isinstance(payload, dict):
        return None, _error(400, "body must be a JSON object")
    return payload, None


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config if config is not None else ServiceConfig()

    state: dict = {"ready": False, "tables_loaded": 0}
    sessions = SessionStore(
        config.max_sessions, config.max_attempts_per_session, config.session_log_path
    )

    @asynccontextmanager
    async def _lifespan(app: FastAPI):
        cfg = config.normalizer_config
        state["normalizer"] = Normalizer(cfg)
        state["pass_normalizers"] = {}
        classifier = config.classifier
        if classifier is None:
            from .chardata import data_path, load_word_list

            classifier = BuiltinClassifier(load_word_list(data_path("demo_lexicon.txt")))
        state["classifier"] = classifier
        state["tables_loaded"] = len(cfg.resolved_tables)
        state["ready"] = True
        yield

    app = FastAPI(
        title="atnorm",
        version=__version__,
        docs_url=None,
        redoc_url=None,
        lifespan=_lifespan,
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _normalizer_for(passes: list | None) -> Normalizer:
        if passes is None:
            return state["normalizer"]
        key = tuple(passes)
        cache: dict = state["pass_normalizers"]
        if key not in cache:
            base = config.normalizer_config
            cache[key] = Normalizer(
                NormalizerConfig(
                    tables=base.tables,
                    char_classes=base.char_classes,
                    interior_punct_threshold=base.interior_punct_threshold,
                    url_detection=base.url_detection,
                    censor_lexicon=base.censor_lexicon,
                    enabled_passes=key,
                )
            )
        return cache[key]

    @app.get("/health")
    def health():
        if not state["ready"]:
            return _error(503, "starting up", status="starting")
        return {
            "status": "ok",
            "version": __version__,
            "tables_loaded": state["tables_loaded"],
        }

    @app.post("/normalize")
    async def normalize_endpoint(request: Request):
        payload, err = await _read_json_object(request)
        if err is not None:
            return err
        text = payload.get("text")
        if not isinstance(text, str):
            return _error(400, "missing or non-string field 'text'")
        passes = payload.get("passes")
        if passes is not None:
            if not isinstance(passes, list) or not all(isinstance(p, str) for p in passes):
                return _error(422, "field 'passes' must be a list of pass names")
            unknown = [p for p in passes if p not in PASS_ORDER]
            if unknown:
                return _error(
                    422, f"unknown pass name(s) {unknown}", valid_passes=list(PASS_ORDER)
                )
        result = _normalizer_for(passes).normalize(text)
        return {"normalized": result.text, "edits": [e.to_json() for e in result.edits]}

    @app.post("/attack")
    async def attack_endpoint(request: Request):
        payload, err = await _read_json_object(request)
        if err is not None:
            return err
        text = payload.get("text")
        if not isinstance(text, str):
            return _error(400, "missing or non-string field 'text'")
        kind = payload.get("kind")
        if kind not in ATTACK_KINDS:
            return _error(
                422, f"unknown attack kind {kind!r}", valid_kinds=list(ATTACK_KINDS)
            )
        seed = payload.get("seed")
        if seed is None:
            seed = secrets.randbits(32)
        elif not isinstance(seed, int) or isinstance(seed, bool):
            return _error(422, "field 'seed' must be an integer")
        params_field = payload.get("params")
        params = sample_params(seed)
        if params_field is not None:
            if not isinstance(params_field, dict):
                return _error(422, "field 'params' must be an object")
            try:
                params = AttackParams.from_json({**params.to_json(), **params_field})
            except (TypeError, ValueError) as exc:
                return _error(422, f"bad params: {exc}")
        attacked = apply_attack(text, AttackSpec(kind, params, seed))
        return {"attacked": attacked, "params_used": params.to_json(), "seed_used": seed}

    @app.post("/score")
    async def score_endpoint(request: Request):
        payload, err = await _read_json_object(request)
        if err is not None:
            return err
        classifier = state["classifier"]
        text = payload.get("text")
        premise = payload.get("premise")
        hypothesis = payload.get("hypothesis")
        if text is not None:
            if not isinstance(text, str):
                return _error(400, "field 'text' must be a string")
            if classifier.task != "binary":
                return _error(422, "configured classifier expects premise and hypothesis")
            record = {"id": "req", "text": text}
            subject = text
        elif premise is not None or hypothesis is not None:
            if not isinstance(premise, str) or not isinstance(hypothesis, str):
                return _error(422, "premise and hypothesis must both be strings")
            if classifier.task != "nli":
                return _error(422, "configured classifier expects a text field")
            record = {"id": "req", "premise": premise, "hypothesis": hypothesis}
            subject = hypothesis
        else:
            return _error(400, "missing field 'text' (or premise and hypothesis)")

        do_normalize = payload.get("normalize", False)
        if not isinstance(do_normalize, bool):
            return _error(422, "field 'normalize' must be a boolean")
        session_id = payload.get("session_id")
        if session_id is not None and not isinstance(session_id, str):
            return _error(422, "field 'session_id' must be a string")
        meta = payload.get("meta")
        if meta is not None and not isinstance(meta, dict):
            return _error(422, "field 'meta' must be an object")

        try:
            raw = classifier.score(record)
            normalized_block = None
            normalized_text = None
            if do_normalize:
                normalized_text = state["normalizer"].normalize(subject).text
                if classifier.task == "binary":
                    norm_record = {"id": "req-normalized", "text": normalized_text}
                else:
                    norm_record = {
                        "id": "req-normalized",
                        "premise": premise,
                        "hypothesis": normalized_text,
                    }
                norm_pred = classifier.score(norm_record)
                normalized_block = {"text": normalized_text, **norm_pred.to_json()}
        except RetriableClassifierError as exc:
            return _error(503, f"external classifier unavailable: {exc}")
        except TerminalClassifierError as exc:
            return _error(502, f"external classifier rejected the request: {exc}")

        response = {**raw.to_json(), "normalized": normalized_block}
        if session_id is not None:
            attempt = {
                "input": subject,
                "label": raw.label,
                "score": raw.to_json()["score"],
                "normalized_text": normalized_text,
                "normalized_label": normalized_block["label"] if normalized_block else None,
                "normalized_score": normalized_block["score"] if normalized_block else None,
                "meta": meta,
                "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            }
            stored = sessions.append(session_id, attempt)
            if stored is None:
                return _error(409, "session attempt limit reached")
            response["attempt"] = stored
        return response

    @app.get("/session/{session_id}")
    def session_endpoint(session_id: str):
        log = sessions.get(session_id)
        if log is None:
            return _error(404, f"unknown session {session_id!r}")
        return {"session_id": session_id, "attempts": log}

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(config.static_dir), html=True), name="static")

    return app
