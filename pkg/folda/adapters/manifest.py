#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Bench manifests: one model spec per line as ``key=value`` pairs, e.g.

    construct=C breadth=3 depth=5 seed=1
    construct=CN breadth=2 depth=2 nesting_factor=2 nesting_breadth=2 nesting_depth=2 traces=10

Keys are the ``ModelSpec`` fields plus an optional ``traces`` count. Blank
lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from pathlib import Path

from folda.core.errors import InvalidSpecError, ParseError
from folda.domain.generator import make_spec
from folda.domain.schemas import ManifestEntry, ModelSpec

KEYS = frozenset(field.alias or name for name, field in ModelSpec.model_fields.items()) | {"traces"}


def parse_manifest_line(line: str, *, source: str = "<string>", lineno: int = 1) -> ManifestEntry:
    where = f"line {lineno}"
    fields: dict[str, str] = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise ParseError(f"expected key=value, got {token!r}", source=source, element=where)
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", source=source, element=where)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", source=source, element=where)
        fields[key] = value
    traces = fields.pop("traces", None)
    try:
        spec = make_spec(**fields)
    except InvalidSpecError as exc:
        raise InvalidSpecError(f"{source} {where}: {exc}") from None
    if traces is not None and (not traces.isdigit() or int(traces) < 1):
        raise ParseError(f"traces must be a positive integer, got {traces!r}", source=source, element=where)
    return ManifestEntry(spec=spec, traces=int(traces) if traces is not None else None)


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    entries = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.append(parse_manifest_line(line, source=str(path), lineno=lineno))
    return entries
