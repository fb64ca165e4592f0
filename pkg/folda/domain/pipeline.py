#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""Trace net, synchronous product and the chosen aligner, as one call."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from folda.core.di import get_settings
from folda.domain.alignment import Alignment
from folda.domain.nets import PetriNet, Trace, build_event_net
from folda.domain.product import SyncProduct, scaled_standard_cost, synchronous_product
from folda.domain.schemas import RunMetrics, Variant
from folda.domain.search import astar_align, dijkstra_align
from folda.domain.unfolding import DirectedUnfolding


@dataclass
class AlignmentRun:
    sp: SyncProduct
    alignment: Optional[Alignment]
    metrics: RunMetrics
    unfolding: Optional[DirectedUnfolding] = None


def product_for(model: PetriNet, trace: Trace, silent_cost_denominator: Optional[int] = None) -> SyncProduct:
    if silent_cost_denominator is None:
        silent_cost_denominator = get_settings().silent_cost_denominator
    return synchronous_product(
        model, build_event_net(trace), scaled_standard_cost(silent_cost_denominator)
    )


def run_aligner(
        sp: SyncProduct,
        variant: Variant,
        timeout: Optional[float] = None,
        *,
        debug: Optional[bool] = None,
) -> AlignmentRun:
    settings = get_settings()
    if timeout is None:
        timeout = settings.align_timeout
    if variant.is_unfolding:
        unfolding = DirectedUnfolding(
            sp, variant, debug=settings.debug_checks if debug is None else debug
        )
        alignment, metrics = unfolding.run(timeout)
        return AlignmentRun(sp, alignment, metrics, unfolding)
    if variant is Variant.ASTAR:
        alignment, metrics = astar_align(sp, timeout)
    else:
        alignment, metrics = dijkstra_align(sp, timeout)
    return AlignmentRun(sp, alignment, metrics)


def align_trace(
        model: PetriNet,
        trace: Trace,
        variant: Variant,
        timeout: Optional[float] = None,
        *,
        debug: Optional[bool] = None,
) -> AlignmentRun:
    return run_aligner(product_for(model, trace), variant, timeout, debug=debug)
