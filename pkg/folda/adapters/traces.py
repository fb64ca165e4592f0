#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Trace files.

Text (any suffix but ``.json``): one sequential trace per line, activities
separated by commas, ``\\,`` for a literal comma and ``\\\\`` for a
backslash; an empty line is the empty trace.

JSON: ``{"traces": [{"events": [{"id": "e1", "activity": "A"}, ...],
"order": [["e1", "e2"], ...]}]}`` for partial-order traces.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from pydantic import ValidationError

from folda.core.errors import InvalidNetError, ParseError, UsageError
from folda.domain.nets import Trace
from folda.domain.schemas import TraceDoc, TraceEventDoc, TraceFileDoc


def parse_trace_line(line: str, *, source: str = "<string>", lineno: int = 1) -> Trace:
    where = f"line {lineno}"
    if line == "":
        return Trace.sequential([])
    activities: list[str] = []
    current: list[str] = []
    chars = iter(line)
    for ch in chars:
        if ch == "\\":
            escaped = next(chars, None)
            if escaped not in (",", "\\"):
                raise ParseError(f"unknown escape \\{escaped or ''}", source=source, element=where)
            current.append(escaped)
        elif ch == ",":
            activities.append("".join(current))
            current = []
        else:
            current.append(ch)
    activities.append("".join(current))
    if any(not a for a in activities):
        raise ParseError("empty activity name", source=source, element=where)
    return Trace.sequential(activities)


def _escape(activity: str) -> str:
    if "\n" in activity or "\r" in activity:
        raise UsageError(f"activity {activity!r} contains a line break")
    return activity.replace("\\", "\\\\").replace(",", "\\,")


def format_trace_line(trace: Trace) -> str:
    if not trace.is_sequential:
        raise UsageError("partial-order traces need the JSON trace format")
    return ",".join(_escape(a) for _, a in trace.linearized)


def _from_doc(doc: TraceDoc) -> Trace:
    return Trace.partial([(e.id, e.activity) for e in doc.events], doc.order)


def _to_doc(trace: Trace) -> TraceDoc:
    return TraceDoc(
        events=[TraceEventDoc(id=eid, activity=a) for eid, a in trace.events],
        order=sorted(trace.order),
    )


def read_traces(path: str | Path) -> list[Trace]:
    path = Path(path)
    source = str(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=source) from None

    if path.suffix.lower() == ".json":
        try:
            document = TraceFileDoc.model_validate_json(content)
        except ValidationError as exc:
            first = exc.errors()[0]
            location = ".".join(str(x) for x in first["loc"])
            raise ParseError(first["msg"], source=source, element=location) from None
        traces = []
        for index, doc in enumerate(document.traces):
            try:
                traces.append(_from_doc(doc))
            except InvalidNetError as exc:
                raise ParseError(str(exc), source=source, element=f"trace {index}") from None
        return traces

    lines = content.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [parse_trace_line(line, source=source, lineno=i) for i, line in enumerate(lines, start=1)]


def write_traces(traces: Iterable[Trace], path: str | Path) -> Path:
    path = Path(path)
    traces = list(traces)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".json":
        document = TraceFileDoc(traces=[_to_doc(t) for t in traces])
        path.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
    else:
        path.write_text("".join(format_trace_line(t) + "\n" for t in traces), encoding="utf-8")
    return path
