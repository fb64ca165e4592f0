#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from pathlib import Path
import argparse

from folda.adapters.pnml import write_pnml
from folda.adapters.traces import write_traces
from folda.core.di import get_settings
from folda.core.log import get_logger
from folda.domain.generator import generate_model, inject_deviation, make_spec, model_id, simulate_traces
from folda.domain.schemas import Construct, DeviationPlacement

logger = get_logger(__name__)


def trace_file_name(ident: str, placement: DeviationPlacement) -> str:
    if placement is DeviationPlacement.NONE:
        return f"{ident}.traces"
    return f"{ident}.{placement.value}.traces"


def run_gen(args: argparse.Namespace) -> int:
    settings = get_settings()
    spec = make_spec(
        construct=args.construct,
        breadth=args.breadth,
        depth=args.depth,
        nesting_factor=args.nesting_factor,
        nesting_breadth=args.nesting_breadth,
        nesting_depth=args.nesting_depth,
        seed=args.seed,
    )
    placement = DeviationPlacement(args.deviation)
    count = args.traces if args.traces is not None else settings.bench_traces

    model = generate_model(spec)
    traces = simulate_traces(model, count, spec.seed, settings.simulation_max_len)
    traces = [inject_deviation(t, placement) for t in traces]

    out = Path(args.out)
    ident = model_id(spec)
    model_path = write_pnml(model, out / f"{ident}.pnml")
    traces_path = write_traces(traces, out / trace_file_name(ident, placement))
    logger.info(
        "Generated benchmark input",
        extra={"model_id": ident, "traces": count, "placement": placement.value},
    )
    print(model_path)
    print(traces_path)
    return 0


def register(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("gen", help="Generate a model and simulated traces")
    parser.add_argument("--construct", choices=[c.value for c in Construct], required=True)
    parser.add_argument("--breadth", type=int, required=True)
    parser.add_argument("--depth", type=int, required=True)
    parser.add_argument("--nesting-factor", type=int, default=None)
    parser.add_argument("--nesting-breadth", type=int, default=None)
    parser.add_argument("--nesting-depth", type=int, default=None)
    parser.add_argument("--traces", type=int, default=None, help="Number of traces (default FOLDA_BENCH_TRACES)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--deviation", choices=[p.value for p in DeviationPlacement], default=DeviationPlacement.NONE.value,
        help="Remove one event from every trace",
    )
    parser.add_argument("--out", required=True, help="Output directory")
    parser.set_defaults(handler=run_gen)
    return parser
