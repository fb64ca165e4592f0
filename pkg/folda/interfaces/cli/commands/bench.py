#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Benchmark harness: manifest specs x placements x variants x traces.

Every job regenerates its model and traces from the model spec seed, so results do
not depend on which worker runs the job. Rows are written in job order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Iterator
import argparse

from pydantic import BaseModel, ConfigDict

from folda.adapters.manifest import read_manifest
from folda.adapters.metrics import write_metrics_csv
from folda.core.di import get_settings
from folda.core.errors import FoldaError, UsageError
from folda.core.log import bind_run, configure_worker_logging, get_logger
from folda.domain.generator import generate_model, inject_deviation, model_id, simulate_traces
from folda.domain.nets import PetriNet, Trace
from folda.domain.pipeline import product_for, run_aligner
from folda.domain.schemas import DeviationPlacement, ManifestEntry, ModelSpec, RunMetrics, Variant
from folda.interfaces.cli.commands.align import positive_float

logger = get_logger(__name__)


class BenchJob(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    spec: ModelSpec
    placement: DeviationPlacement
    variant: Variant
    trace_index: int
    traces: int
    timeout: float
    silent_cost_denominator: int
    simulation_max_len: int
    debug: bool = False


@lru_cache(maxsize=32)
def _bench_input(spec: ModelSpec, count: int, max_len: int) -> tuple[PetriNet, tuple[Trace, ...]]:
    model = generate_model(spec)
    return model, tuple(simulate_traces(model, count, spec.seed, max_len))


def _align_job(job: BenchJob, ident: str) -> RunMetrics:
    model, traces = _bench_input(job.spec, job.traces, job.simulation_max_len)
    trace = inject_deviation(traces[job.trace_index], job.placement)
    sp = product_for(model, trace, job.silent_cost_denominator)
    run = run_aligner(sp, job.variant, job.timeout, debug=job.debug)
    return run.metrics.model_copy(update={
        "model_id": ident, "trace_id": str(job.trace_index), "placement": job.placement,
    })


def run_bench_job(job: BenchJob) -> RunMetrics:
    """Align one trace; failures become rows carrying the error message."""
    ident = model_id(job.spec)
    with bind_run(job_id=job.index, trace_id=job.trace_index, variant=job.variant.value):
        try:
            return _align_job(job, ident)
        except FoldaError as exc:
            logger.error("Bench job failed", extra={"code": exc.code, "model_id": ident})
            return RunMetrics(
                variant=job.variant, model_id=ident, trace_id=str(job.trace_index),
                placement=job.placement, error=f"{exc.code}: {exc}",
            )
        except Exception as exc:
            logger.exception("Bench job crashed", extra={"model_id": ident})
            return RunMetrics(
                variant=job.variant, model_id=ident, trace_id=str(job.trace_index),
                placement=job.placement, error=f"INTERNAL_ERROR: {type(exc).__name__}: {exc}",
            )


def plan_jobs(
        entries: list[ManifestEntry],
        placements: list[DeviationPlacement],
        variants: list[Variant],
        *,
        timeout: float,
        default_traces: int,
        seed_offset: int = 0,
        traces_override: int | None = None,
) -> Iterator[BenchJob]:
    settings = get_settings()
    index = 0
    for entry in entries:
        spec = entry.spec.model_copy(update={"seed": entry.spec.seed + seed_offset})
        count = traces_override if traces_override is not None else entry.traces or default_traces
        for placement in placements:
            for variant in variants:
                for trace_index in range(count):
                    yield BenchJob(
                        index=index,
                        spec=spec,
                        placement=placement,
                        variant=variant,
                        trace_index=trace_index,
                        traces=count,
                        timeout=timeout,
                        silent_cost_denominator=settings.silent_cost_denominator,
                        simulation_max_len=settings.simulation_max_len,
                        debug=settings.debug_checks,
                    )
                    index += 1


def run_jobs(jobs: list[BenchJob], workers: int) -> list[RunMetrics]:
    if workers <= 1 or len(jobs) <= 1:
        return [run_bench_job(job) for job in jobs]
    initargs = (get_settings(),)
    with ProcessPoolExecutor(
            max_workers=workers, initializer=configure_worker_logging, initargs=initargs,
    ) as executor:
        return list(executor.map(run_bench_job, jobs, chunksize=1))


def _choices(raw: str, enum: type, flag: str) -> list:
    values = []
    for item in (s.strip() for s in raw.split(",")):
        if not item:
            continue
        try:
            values.append(enum(item))
        except ValueError:
            allowed = ", ".join(e.value for e in enum)
            raise UsageError(f"{flag}: unknown value {item!r} (expected {allowed})") from None
    if not values:
        raise UsageError(f"{flag}: empty list")
    return list(dict.fromkeys(values))


def run_bench(args: argparse.Namespace) -> int:
    settings = get_settings()
    variants = _choices(args.variants or ",".join(settings.bench_variants), Variant, "--variants")
    placements = _choices(
        args.placements or ",".join(settings.bench_placements), DeviationPlacement, "--placements"
    )
    workers = args.jobs if args.jobs is not None else settings.jobs
    if workers < 1:
        raise UsageError("--jobs must be at least 1")
    if args.traces is not None and args.traces < 0:
        raise UsageError("--traces must not be negative")
    timeout = args.timeout if args.timeout is not None else settings.align_timeout

    entries = read_manifest(args.manifest)
    jobs = list(plan_jobs(
        entries, placements, variants,
        timeout=timeout,
        default_traces=settings.bench_traces,
        seed_offset=args.seed,
        traces_override=args.traces,
    ))
    logger.info("Running benchmark", extra={"jobs": len(jobs), "workers": workers})
    records = run_jobs(jobs, workers)
    write_metrics_csv(records, args.out)

    failed = sum(1 for r in records if r.error)
    timed_out = sum(1 for r in records if r.timed_out)
    print(f"{len(records)} rows written to {args.out} ({timed_out} timed out, {failed} failed)")
    return 0


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("bench", help="Run the benchmark protocol over a manifest")
    parser.add_argument("--manifest", required=True, help="One model spec per line")
    parser.add_argument("--variants", default=None, help="Comma separated (default FOLDA_BENCH_VARIANTS)")
    parser.add_argument("--placements", default=None, help="Comma separated (default FOLDA_BENCH_PLACEMENTS)")
    parser.add_argument("--timeout", type=positive_float, default=None, help="Seconds per trace")
    parser.add_argument("--out", required=True, help="Metrics CSV")
    parser.add_argument("--jobs", type=int, default=None, help="Worker processes (default FOLDA_JOBS)")
    parser.add_argument("--seed", type=int, default=0, help="Offset added to every manifest seed")
    parser.add_argument("--traces", type=int, default=None, help="Traces per spec, overrides the manifest")
    parser.set_defaults(handler=run_bench)
    return parser
