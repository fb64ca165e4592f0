#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Logging for the CLI and the benchmark workers.

Records carry the benchmark job and the trace being aligned, bound with
:func:`bind_run`. Results go to stdout; log records go to ``log_stream``
(stderr unless configured otherwise) and optionally to a rotating file.
"""
from __future__ import annotations

from typing import Any, Iterator, Optional
from pathlib import Path
import logging.handlers
import datetime as dt
import contextlib
import contextvars
import traceback
import logging
import json
import sys
import time

from folda.core.settings import Settings

_run_context: contextvars.ContextVar[dict[str, Optional[str]]] = contextvars.ContextVar(
    "run_context", default={}
)

CONTEXT_KEYS = ("job_id", "trace_id", "variant")

# attributes every LogRecord has; anything else on a record came in via ``extra``
_RECORD_ATTRS = frozenset(vars(logging.LogRecord("", 0, "", 0, "", None, None))) | {
    "message",
    "asctime",
}

_MARK = "_folda_configured"


@contextlib.contextmanager
def bind_run(**ids: Any) -> Iterator[dict[str, Optional[str]]]:
    """Attach job/trace/variant ids to every record logged inside the block."""
    unknown = set(ids) - set(CONTEXT_KEYS)
    if unknown:
        raise TypeError(f"unknown run context key(s): {', '.join(sorted(unknown))}")
    merged = {**_run_context.get(), **{k: None if v is None else str(v) for k, v in ids.items()}}
    token = _run_context.set(merged)
    try:
        yield merged
    finally:
        _run_context.reset(token)


def current_run() -> dict[str, Optional[str]]:
    context = _run_context.get()
    return {key: context.get(key) for key in CONTEXT_KEYS}


class RunContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in current_run().items():
            if getattr(record, key, None) is None:
                setattr(record, key, value)
        return True


class JsonFormatter(logging.Formatter):
    def __init__(
            self,
            *,
            service: Optional[str] = None,
            environment: Optional[str] = None,
            version: Optional[str] = None,
            utc: bool = True,
            include_logger_name: bool = True,
    ):
        super().__init__()
        self.labels = {"service": service, "env": environment, "version": version}
        self.utc = utc
        self.include_logger_name = include_logger_name

    def formatTime(self, record: logging.LogRecord, datefmt: Optional[str] = None) -> str:  # type: ignore[override]
        ts = dt.datetime.fromtimestamp(record.created, dt.timezone.utc if self.utc else None)
        return ts.isoformat()

    def format(self, record: logging.LogRecord) -> str:
        payload: dict[str, Any] = {
            "ts": self.formatTime(record),
            "level": record.levelname,
            "message": record.getMessage(),
            "pid": record.process,
        }
        if self.include_logger_name:
            payload["logger"] = record.name
        for key in CONTEXT_KEYS:
            payload[key] = getattr(record, key, None)
        payload.update({k: v for k, v in self.labels.items() if v})

        if record.exc_info and record.exc_info[0] is not None:
            payload["exc_type"] = record.exc_info[0].__name__
            payload["exc_message"] = str(record.exc_info[1])
            payload["traceback"] = "".join(traceback.format_exception(*record.exc_info))

        for key, value in record.__dict__.items():
            if key.startswith("_") or key in payload or key in _RECORD_ATTRS:
                continue
            payload[key] = value
        return json.dumps(payload, ensure_ascii=False, default=str)


class PlainFormatter(logging.Formatter):
    def __init__(self, fmt: str, utc: bool = True) -> None:
        super().__init__(fmt=fmt, datefmt=None)
        self.converter = time.gmtime if utc else time.localtime


def _formatter(settings: Settings) -> logging.Formatter:
    if settings.log_format == "json":
        return JsonFormatter(
            service=settings.app_name,
            environment=settings.app_env,
            version=settings.app_version,
            utc=settings.log_utc,
        )
    return PlainFormatter(settings.plain_format, utc=settings.log_utc)


def _handlers(settings: Settings) -> list[logging.Handler]:
    stream = sys.stdout if settings.log_stream == "stdout" else sys.stderr
    handlers: list[logging.Handler] = [logging.StreamHandler(stream=stream)]
    if settings.log_to_file:
        log_path = Path(settings.log_dir).expanduser() / f"{settings.app_name}.log"
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.handlers.TimedRotatingFileHandler(
            filename=str(log_path),
            when="midnight",
            backupCount=settings.log_file_backups,
            encoding="utf-8",
            utc=settings.log_utc,
        ))
    return handlers


def is_configured() -> bool:
    return any(getattr(h, _MARK, False) for h in logging.getLogger().handlers)


def configure_logging(settings: Settings, *, force: bool = False) -> None:
    root = logging.getLogger()
    if is_configured() and not force:
        return
    if force:
        for h in list(root.handlers):
            root.removeHandler(h)

    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    root.setLevel(level)
    formatter = _formatter(settings)
    for handler in _handlers(settings):
        handler.setLevel(level)
        handler.setFormatter(formatter)
        handler.addFilter(RunContextFilter())
        setattr(handler, _MARK, True)
        root.addHandler(handler)

    if settings.log_capture_warnings:
        logging.captureWarnings(True)


def configure_worker_logging(settings: Settings) -> None:
    """Process-pool initializer; forked workers keep the parent's handlers."""
    configure_logging(settings)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    return logging.getLogger(name or __name__)
