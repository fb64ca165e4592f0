#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Artificial models with one dominant construct, trace simulation and
single-event deletions.

Concurrency is a silent AND-split into parallel branches closed by a silent
AND-join, choice is a place whose outgoing branches re-merge into one place,
a loop is a chain with a silent back-edge and a silent exit. Nested models
replace the first step of every branch by a smaller block of the same
construct, level after level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional
import random

from pydantic import ValidationError

from folda.core.errors import EmptyTraceError, InvalidSpecError
from folda.core.log import get_logger
from folda.domain.nets import PetriNet, Trace, enabled, fire
from folda.domain.schemas import Construct, DeviationPlacement, ModelSpec

logger = get_logger(__name__)

LOOP_PREFIX = "tau_loop"


def make_spec(**fields: Any) -> ModelSpec:
    try:
        return ModelSpec(**fields)
    except ValidationError as exc:
        reasons = "; ".join(err["msg"] for err in exc.errors())
        raise InvalidSpecError(f"invalid model spec: {reasons}") from None


def model_id(spec: ModelSpec) -> str:
    parts = [spec.construct_kind.value, f"b{spec.breadth}", f"d{spec.depth}"]
    if spec.construct_kind.nested:
        parts += [f"nf{spec.nesting_factor}", f"nb{spec.nesting_breadth}", f"nd{spec.nesting_depth}"]
    parts.append(f"s{spec.seed}")
    return "_".join(parts)


@dataclass
class _Builder:
    spec: ModelSpec
    places: list[str] = field(default_factory=list)
    transitions: dict[str, Optional[str]] = field(default_factory=dict)
    arcs: list[tuple[str, str]] = field(default_factory=list)
    labels: int = 0
    silent: int = 0

    def place(self) -> str:
        name = f"p{len(self.places)}"
        self.places.append(name)
        return name

    def visible(self, src: str, dst: str) -> None:
        self.labels += 1
        tid = f"t{self.labels}"
        self.transitions[tid] = f"a{self.labels}"
        self.arcs += [(src, tid), (tid, dst)]

    def tau(self, kind: str, inputs: list[str], outputs: list[str]) -> str:
        self.silent += 1
        tid = f"tau_{kind}{self.silent}"
        self.transitions[tid] = None
        self.arcs += [(p, tid) for p in inputs] + [(tid, p) for p in outputs]
        return tid

    def branch(self, src: str, dst: str, depth: int, level: int) -> None:
        current = src
        for step in range(depth):
            target = dst if step == depth - 1 else self.place()
            if step == 0 and self.spec.construct_kind.nested and level < self.spec.nesting_factor:
                self.block(current, target, self.spec.nesting_breadth, self.spec.nesting_depth, level + 1)
            else:
                self.visible(current, target)
            current = target

    def block(self, src: str, dst: str, breadth: int, depth: int, level: int) -> None:
        if self.spec.construct_kind in (Construct.C, Construct.CN):
            starts = [self.place() for _ in range(breadth)]
            ends = [self.place() for _ in range(breadth)]
            self.tau("split", [src], starts)
            for a, b in zip(starts, ends):
                self.branch(a, b, depth, level)
            self.tau("join", ends, [dst])
        else:
            for _ in range(breadth):
                self.branch(src, dst, depth, level)

    def loop(self, src: str, dst: str, depth: int) -> None:
        chain = [src] + [self.place() for _ in range(depth)]
        for a, b in zip(chain, chain[1:]):
            self.visible(a, b)
        last = chain[-1]
        self.transitions[LOOP_PREFIX] = None
        self.arcs += [(last, LOOP_PREFIX), (LOOP_PREFIX, src)]
        self.tau("exit", [last], [dst])


def generate_model(spec: ModelSpec) -> PetriNet:
    builder = _Builder(spec)
    source, sink = builder.place(), builder.place()
    if spec.construct_kind is Construct.L:
        builder.loop(source, sink, spec.depth)
    else:
        builder.block(source, sink, spec.breadth, spec.depth, 0)
    net = PetriNet.build(
        builder.places, builder.transitions, builder.arcs, [source], [sink], name=model_id(spec)
    )
    logger.debug(
        "Generated model",
        extra={"model_id": net.name, "places": len(net.places), "transitions": len(net.transitions)},
    )
    return net


def simulate_run(net: PetriNet, rng: random.Random, max_len: int) -> list[str]:
    """Uniformly random play from the initial to the final marking.

    After ``max_len`` firings the loop-back transitions are no longer chosen.
    """
    marking = net.initial_marking
    fired: list[str] = []
    while marking != net.final_marking:
        choices = sorted(enabled(net, marking))
        if len(fired) >= max_len:
            choices = [t for t in choices if not t.startswith(LOOP_PREFIX)]
        if not choices:
            raise InvalidSpecError(f"simulation of {net.name} deadlocked in {marking}")
        t = rng.choice(choices)
        marking = fire(net, marking, t)
        fired.append(t)
    return fired


def simulate_traces(net: PetriNet, n: int, seed: int, max_len: int = 50) -> list[Trace]:
    rng = random.Random(seed)
    traces = []
    for _ in range(n):
        run = simulate_run(net, rng, max_len)
        traces.append(Trace.sequential(net.labels[t] for t in run if not net.is_silent(t)))
    return traces


def inject_deviation(trace: Trace, placement: DeviationPlacement) -> Trace:
    """Remove the first, middle (index ``(len - 1) // 2``) or last event."""
    placement = DeviationPlacement(placement)
    if placement is DeviationPlacement.NONE:
        return trace
    if not trace.events:
        raise EmptyTraceError()
    ranked = trace.linearized
    index = {
        DeviationPlacement.START: 0,
        DeviationPlacement.MIDDLE: (len(ranked) - 1) // 2,
        DeviationPlacement.END: len(ranked) - 1,
    }[placement]
    removed = ranked[index][0]
    if trace.is_sequential:
        return Trace.sequential(a for eid, a in ranked if eid != removed)
    return Trace.partial(
        [ev for ev in trace.events if ev[0] != removed],
        [(x, y) for x, y in trace.closure if removed not in (x, y)],
    )
