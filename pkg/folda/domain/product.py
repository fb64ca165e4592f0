#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""Synchronous product of a model and an event net, and move costs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from collections import deque
from typing import Callable, Mapping, Optional, Sequence
from enum import Enum

from folda.core.errors import InvalidNetError
from folda.domain.nets import Marking, PetriNet, Trace, enabled, fire, replay

SILENT_COST = Fraction(1, 10000)

SOURCE_PLACE = "sp:source"
SINK_PLACE = "sp:sink"
DUMMY_START = "sp:start"
DUMMY_END = "sp:end"

MODEL_PREFIX = "m:"
LOG_PREFIX = "l:"


class MoveType(str, Enum):
    LOG = "log"
    MODEL = "model"
    SYNC = "sync"
    DUMMY_START = "dummy_start"
    DUMMY_END = "dummy_end"


@dataclass(frozen=True, slots=True)
class MoveKind:
    """A move of an alignment; ``>>`` sides are represented by ``None``.

    ``event``/``activity`` describe the trace side, ``transition``/``label``
    the model side (``label`` is ``None`` for silent model transitions).
    """

    type: MoveType
    event: Optional[str] = None
    activity: Optional[str] = None
    transition: Optional[str] = None
    label: Optional[str] = None

    def __post_init__(self) -> None:
        has_log = self.event is not None
        has_model = self.transition is not None
        expected = {
            MoveType.LOG: (True, False),
            MoveType.MODEL: (False, True),
            MoveType.SYNC: (True, True),
            MoveType.DUMMY_START: (False, False),
            MoveType.DUMMY_END: (False, False),
        }[self.type]
        if (has_log, has_model) != expected:
            raise InvalidNetError(f"malformed {self.type.value} move")
        if self.type is MoveType.SYNC and (self.label is None or self.label != self.activity):
            raise InvalidNetError(
                f"synchronous move pairs {self.activity!r} with {self.label!r}"
            )

    @classmethod
    def log(cls, event: str, activity: str) -> "MoveKind":
        return cls(MoveType.LOG, event=event, activity=activity)

    @classmethod
    def model(cls, transition: str, label: Optional[str]) -> "MoveKind":
        return cls(MoveType.MODEL, transition=transition, label=label)

    @classmethod
    def sync(cls, event: str, activity: str, transition: str, label: Optional[str]) -> "MoveKind":
        return cls(MoveType.SYNC, event=event, activity=activity, transition=transition, label=label)

    @property
    def is_dummy(self) -> bool:
        return self.type in (MoveType.DUMMY_START, MoveType.DUMMY_END)

    @property
    def is_silent(self) -> bool:
        return self.type is MoveType.MODEL and self.label is None

    def pair(self) -> tuple[str, str]:
        """``(log side, model side)`` with ``>>`` for a skipped side."""
        log_side = self.activity if self.event is not None else ">>"
        if self.transition is None:
            model_side = ">>"
        else:
            model_side = self.label if self.label is not None else f"tau({self.transition})"
        return log_side, model_side

    def __str__(self) -> str:
        if self.is_dummy:
            return self.type.value
        return "({}, {})".format(*self.pair())


CostFunction = Callable[[MoveKind], Fraction]


def standard_cost(kind: MoveKind) -> Fraction:
    if kind.type is MoveType.SYNC or kind.is_dummy:
        return Fraction(0)
    if kind.is_silent:
        return SILENT_COST
    return Fraction(1)


def scaled_standard_cost(denominator: int) -> CostFunction:
    """Standard costs with silent moves at ``1/denominator``."""
    silent = Fraction(1, denominator)

    def cost(kind: MoveKind) -> Fraction:
        if kind.is_silent:
            return silent
        return standard_cost(kind)

    return cost


@dataclass(frozen=True, eq=False)
class SyncProduct:
    net: PetriNet
    moves: Mapping[str, MoveKind]
    costs: Mapping[str, Fraction]
    inner_initial: Marking
    inner_final: Marking
    model: PetriNet
    event_net: PetriNet

    @cached_property
    def inner_transitions(self) -> tuple[str, ...]:
        """Non-dummy transitions, sorted by id."""
        return tuple(t for t in self.net.sorted_transitions if not self.moves[t].is_dummy)

    @property
    def spt(self) -> int:
        return len(self.inner_transitions)

    def cost(self, transition: str) -> Fraction:
        return self.costs[transition]


def _model_id(t: str) -> str:
    return "mm:" + t


def _log_id(e: str) -> str:
    return "lm:" + e


def _sync_id(e: str, t: str) -> str:
    return f"sm:{e}|{t}"


def synchronous_product(
        model: PetriNet,
        event_net: PetriNet,
        cost_fn: CostFunction = standard_cost,
) -> SyncProduct:
    """Model moves, log moves and label-equal synchronous moves, plus dummies.

    Model places are prefixed ``m:`` and event-net places ``l:`` so the two
    nets are always disjoint. ``sp:start`` consumes the fresh source and marks
    the inner initial marking; ``sp:end`` consumes the inner final marking and
    marks the fresh sink.
    """
    for t in model.sorted_transitions:
        if not model.preset[t]:
            raise InvalidNetError(f"model transition {t!r} has an empty preset")
    for t in event_net.sorted_transitions:
        if not event_net.preset[t]:
            raise InvalidNetError(f"event-net transition {t!r} has an empty preset")

    def mp(p: str) -> str:
        return MODEL_PREFIX + p

    def lp(p: str) -> str:
        return LOG_PREFIX + p

    def m_side(marking: Marking) -> list[tuple[str, int]]:
        return [(mp(p), n) for p, n in marking.items]

    def l_side(marking: Marking) -> list[tuple[str, int]]:
        return [(lp(p), n) for p, n in marking.items]

    places = {mp(p) for p in model.places} | {lp(p) for p in event_net.places}
    places |= {SOURCE_PLACE, SINK_PLACE}
    labels: dict[str, Optional[str]] = {}
    moves: dict[str, MoveKind] = {}
    arcs: set[tuple[str, str]] = set()
    weights: dict[tuple[str, str], int] = {}

    def wire(tid: str, pre: list[tuple[str, int]], post: list[tuple[str, int]]) -> None:
        for arc, n in [((p, tid), n) for p, n in pre] + [((tid, p), n) for p, n in post]:
            arcs.add(arc)
            if n > 1:
                weights[arc] = n

    for t in model.sorted_transitions:
        tid = _model_id(t)
        moves[tid] = MoveKind.model(t, model.labels[t])
        labels[tid] = model.labels[t]
        wire(tid, m_side(model.preset[t]), m_side(model.postset[t]))

    for e in event_net.sorted_transitions:
        activity = event_net.labels[e]
        tid = _log_id(e)
        moves[tid] = MoveKind.log(e, activity)
        labels[tid] = activity
        wire(tid, l_side(event_net.preset[e]), l_side(event_net.postset[e]))

        for t in model.sorted_transitions:
            label = model.labels[t]
            if label is None or label != activity:
                continue
            sid = _sync_id(e, t)
            moves[sid] = MoveKind.sync(e, activity, t, label)
            labels[sid] = activity
            wire(
                sid,
                l_side(event_net.preset[e]) + m_side(model.preset[t]),
                l_side(event_net.postset[e]) + m_side(model.postset[t]),
            )

    inner_initial = Marking.of(
        {**{mp(p): n for p, n in model.initial_marking.items},
         **{lp(p): n for p, n in event_net.initial_marking.items}}
    )
    inner_final = Marking.of(
        {**{mp(p): n for p, n in model.final_marking.items},
         **{lp(p): n for p, n in event_net.final_marking.items}}
    )

    moves[DUMMY_START] = MoveKind(MoveType.DUMMY_START)
    moves[DUMMY_END] = MoveKind(MoveType.DUMMY_END)
    labels[DUMMY_START] = None
    labels[DUMMY_END] = None
    wire(DUMMY_START, [(SOURCE_PLACE, 1)], list(inner_initial.items))
    wire(DUMMY_END, list(inner_final.items), [(SINK_PLACE, 1)])

    net = PetriNet(
        places=frozenset(places),
        transitions=frozenset(moves),
        labels=labels,
        arcs=frozenset(arcs),
        initial_marking=Marking.of([SOURCE_PLACE]),
        final_marking=Marking.of([SINK_PLACE]),
        name=f"{model.name}x{event_net.name}",
        weights=weights,
    )
    costs = {t: cost_fn(kind) for t, kind in moves.items()}
    return SyncProduct(
        net=net,
        moves=moves,
        costs=costs,
        inner_initial=inner_initial,
        inner_final=inner_final,
        model=model,
        event_net=event_net,
    )


def check_alignment(sp: SyncProduct, transitions: Sequence[str], trace: Trace) -> Fraction:
    """Validate a firing sequence of non-dummy moves as an alignment of ``trace``.

    The sequence must lead from the inner initial to the inner final marking,
    its log side must be a linearisation of the trace order and its model side
    must replay the model from its initial to its final marking. Returns the
    total cost.
    """
    if any(sp.moves[t].is_dummy for t in transitions):
        raise InvalidNetError("alignments do not contain dummy moves")
    reached = replay(sp.net, transitions, start=sp.inner_initial)
    if reached != sp.inner_final:
        raise InvalidNetError(f"alignment ends in {reached}, expected {sp.inner_final}")

    log_side = [sp.moves[t].event for t in transitions if sp.moves[t].event is not None]
    if sorted(log_side) != sorted(eid for eid, _ in trace.events):
        raise InvalidNetError("log projection does not cover every trace event exactly once")
    position = {eid: i for i, eid in enumerate(log_side)}
    for x, y in trace.order:
        if position[x] > position[y]:
            raise InvalidNetError(f"log projection places {y!r} before {x!r}")

    model_side = [sp.moves[t].transition for t in transitions if sp.moves[t].transition is not None]
    if replay(sp.model, model_side) != sp.model.final_marking:
        raise InvalidNetError("model projection does not reach the final marking")
    return sum((sp.costs[t] for t in transitions), Fraction(0))


def model_reaches_final(model: PetriNet, bound: int) -> Optional[bool]:
    """Whether the model's final marking is reachable, ``None`` past ``bound`` markings."""
    seen = {model.initial_marking}
    queue = deque(seen)
    while queue:
        marking = queue.popleft()
        if marking == model.final_marking:
            return True
        for t in sorted(enabled(model, marking)):
            successor = fire(model, marking, t)
            if successor not in seen:
                if len(seen) >= bound:
                    return None
                seen.add(successor)
                queue.append(successor)
    return False


def no_alignment_reason(sp: SyncProduct, bound: int = 100_000) -> str:
    """Why an exhausted search found no alignment.

    The event net always reaches its final marking, so an easy sound model
    always admits an alignment.
    """
    if model_reaches_final(sp.model, bound) is False:
        return (
            f"model {sp.model.name!r} is not easy sound: "
            "its final marking is unreachable from its initial marking"
        )
    return "the final marking is unreachable in the synchronous product"
