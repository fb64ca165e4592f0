#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from pathlib import Path
from typing import Iterable
import csv

from folda.domain.schemas import RunMetrics

HEADER = (
    "variant", "model_id", "trace_id", "placement", "spt", "trace_len",
    "cost_num", "cost_den", "elapsed_s", "queued", "visited", "timed_out",
)


def metrics_row(record: RunMetrics) -> list[str]:
    if record.cost is None:
        num, den = "", ""
    else:
        num, den = str(record.cost.numerator), str(record.cost.denominator)
    return [
        record.variant.value,
        record.model_id,
        record.trace_id,
        record.placement.value,
        str(record.spt),
        str(record.trace_length),
        num,
        den,
        f"{record.elapsed_time:.6f}",
        str(record.queued_states),
        str(record.visited_states),
        "1" if record.timed_out else "0",
    ]


def write_metrics_csv(records: Iterable[RunMetrics], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(metrics_row(r) for r in records)
    return path


def append_metrics_csv(records: Iterable[RunMetrics], path: str | Path) -> Path:
    """Append rows, writing the header first when the file is new or empty."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(HEADER)
        writer.writerows(metrics_row(r) for r in records)
    return path
