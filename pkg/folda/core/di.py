#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from folda.core.settings import Settings, get_settings as _load_settings
from typing import Any, Iterator, Optional
import contextlib
import contextvars

_settings_override: contextvars.ContextVar[Optional[Settings]] = contextvars.ContextVar(
    "settings_override", default=None
)


def set_settings_override(value: Optional[Settings]) -> contextvars.Token:
    return _settings_override.set(value)


def reset_settings_override(token: contextvars.Token) -> None:
    _settings_override.reset(token)


def get_settings() -> Settings:
    override = _settings_override.get()
    if override is not None:
        return override
    return _load_settings()


@contextlib.contextmanager
def settings_override(**changes: Any) -> Iterator[Settings]:
    """Run a block with the current settings updated by ``changes``."""
    settings = get_settings().model_copy(update=changes)
    token = set_settings_override(settings)
    try:
        yield settings
    finally:
        reset_settings_override(token)
