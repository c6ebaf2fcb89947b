# core/logs.py
"""
Eventos do motor, um JSON por linha no stderr.

Cada linha traz `event` e os campos passados a `log_event`. Dentro de `job_context`
as linhas carregam também `run_id` e `job`, sem que cada módulo precise repassá-los.
"""
from __future__ import annotations

import contextvars
import datetime as _dt
import hashlib
import json
import logging
import sys
import uuid
from contextlib import contextmanager
from typing import Any, Dict, Iterator

from sympy import Rational

from core.settings import get_settings

_JOB: contextvars.ContextVar[Dict[str, str]] = contextvars.ContextVar("ramlim_job", default={})


def _jsonable(value: Any) -> Any:
    """Racionais viram inteiro ou "p/q"; HPoly, formas e afins viram texto."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Rational):
        return int(value) if value.q == 1 else f"{value.p}/{value.q}"
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return str(value)


class _EventFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "ts": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="milliseconds").replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "event": record.getMessage(),
        }
        payload.update(_JOB.get())
        fields = getattr(record, "fields", None)
        if isinstance(fields, dict):
            payload.update(_jsonable(fields))
        return json.dumps(payload, ensure_ascii=False)


def get_logger(name: str = "ramlim") -> logging.Logger:
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    level = getattr(logging, str(get_settings().LOG_LEVEL).upper(), logging.WARNING)
    logger.setLevel(level)
    # stdout fica com o relatório
    h = logging.StreamHandler(stream=sys.stderr)
    h.setFormatter(_EventFormatter())
    logger.addHandler(h)
    logger.propagate = False
    return logger


def new_run_id() -> str:
    return uuid.uuid4().hex


@contextmanager
def job_context(run_id: str, job: str) -> Iterator[None]:
    token = _JOB.set({"run_id": run_id, "job": job})
    try:
        yield
    finally:
        _JOB.reset(token)


def poly_digest(text: str) -> str:
    """Hash curto de um polinômio, para não despejar expressões grandes no log."""
    return hashlib.sha1(str(text).encode("utf-8", errors="ignore")).hexdigest()[:12]


def log_event(logger: logging.Logger, event: str, **fields: Any) -> None:
    logger.info(event, extra={"fields": fields})


def warn_event(logger: logging.Logger, event: str, **fields: Any) -> None:
    logger.warning(event, extra={"fields": fields})
