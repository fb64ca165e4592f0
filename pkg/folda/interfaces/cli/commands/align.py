#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from pathlib import Path
import argparse
import sys

from folda.adapters.dot import write_dot
from folda.adapters.metrics import append_metrics_csv
from folda.adapters.pnml import read_pnml
from folda.adapters.traces import read_traces
from folda.core.di import get_settings
from folda.core.errors import FoldaError, UsageError
from folda.core.log import bind_run, get_logger
from folda.domain.alignment import summarize
from folda.domain.pipeline import AlignmentRun, align_trace
from folda.domain.schemas import RunMetrics, Variant

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _dot_path(base: Path, index: int, count: int) -> Path:
    if count == 1:
        return base
    return base.with_name(f"{base.stem}.{index}{base.suffix or '.dot'}")


def _emit_dot(run: AlignmentRun, index: int, count: int, args: argparse.Namespace) -> None:
    if args.dot and run.alignment is not None:
        write_dot(run.alignment, _dot_path(Path(args.dot), index, count))
    if args.dot_prefix and run.unfolding is not None:
        write_dot(run.unfolding.bp, f"{args.dot_prefix}{index}.dot", final_event=run.unfolding.final_event)


def _report(index: int, run: AlignmentRun) -> None:
    if run.alignment is None:
        print(f"trace {index}: timed out after {run.metrics.elapsed_time:.3f}s")
        return
    cost = run.alignment.cost
    print(f"trace {index}: cost {cost} ({summarize(run.alignment)})")


def run_align(args: argparse.Namespace) -> int:
    settings = get_settings()
    variant = Variant(args.variant)
    timeout = args.timeout if args.timeout is not None else settings.align_timeout
    if args.dot_prefix and not variant.is_unfolding:
        raise UsageError(f"--dot-prefix needs an unfolding variant, got {variant.value}")

    model = read_pnml(args.model)
    traces = read_traces(args.traces)
    logger.info(
        "Aligning traces",
        extra={"variant": variant.value, "traces": len(traces), "model": model.name},
    )

    records: list[RunMetrics] = []
    failures = 0
    timeouts = 0
    for index, trace in enumerate(traces):
        try:
            with bind_run(trace_id=index, variant=variant.value):
                run = align_trace(model, trace, variant, timeout, debug=args.debug or None)
        except FoldaError as exc:
            failures += 1
            logger.error("Alignment failed", extra={"code": exc.code, "trace_id": str(index)})
            print(f"trace {index}: error [{exc.code}]: {exc}", file=sys.stderr)
            records.append(RunMetrics(
                variant=variant, model_id=model.name, trace_id=str(index),
                trace_length=len(trace), error=str(exc),
            ))
            continue
        if run.alignment is None:
            timeouts += 1
        _report(index, run)
        _emit_dot(run, index, len(traces), args)
        records.append(run.metrics.model_copy(update={"model_id": model.name, "trace_id": str(index)}))

    if args.metrics:
        append_metrics_csv(records, args.metrics)

    aligned = len(traces) - failures - timeouts
    print(f"aligned {aligned}/{len(traces)} traces ({timeouts} timed out, {failures} failed)")
    if failures:
        return EXIT_ERROR
    if timeouts:
        return EXIT_TIMEOUT
    return EXIT_OK


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("align", help="Align every trace of a file against a model")
    parser.add_argument("model", help="PNML model with a final marking")
    parser.add_argument("traces", help="Trace file (.json for partial orders, text otherwise)")
    parser.add_argument(
        "--variant", choices=[v.value for v in Variant], default=Variant.FOLDA_N.value,
    )
    parser.add_argument("--timeout", type=positive_float, default=None, help="Seconds per trace")
    parser.add_argument("--dot", metavar="PATH", help="Write the partial-order alignment as DOT")
    parser.add_argument("--dot-prefix", metavar="PREFIX", help="Write each branching process as DOT")
    parser.add_argument("--metrics", metavar="CSV", help="Append one metrics row per trace")
    parser.add_argument("--debug", action="store_true", help="Check unfolding invariants after every append")
    parser.set_defaults(handler=run_align)
    return parser
