#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Directed, cost-ordered unfolding of a synchronous product.

The branching process grows one event at a time: the cheapest queued
extension (by local-configuration cost, plus the marking-equation bound for
the heuristic variant) is appended, its postset conditions are created and
the new extensions it enables are queued. Events whose marking was already
reached by a smaller configuration are cut-offs and are never extended. The
first appended dummy-end event that leaves exactly the sink marked yields an
optimal partial-order alignment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional
from collections import Counter
import heapq
import time

from folda.core.di import get_settings
from folda.core.errors import InvariantViolation, NoAlignmentError
from folda.core.log import get_logger
from folda.domain.alignment import POAlignment
from folda.domain.heuristic import MarkingEquationHeuristic
from folda.domain.nets import Marking, replay
from folda.domain.product import DUMMY_END, SyncProduct, no_alignment_reason
from folda.domain.schemas import RunMetrics, Variant

logger = get_logger(__name__)

Key = tuple[Fraction, int]


@dataclass(slots=True)
class Condition:
    id: int
    place: str
    input_event: Optional[int] = None


@dataclass(slots=True)
class UnfEvent:
    id: int
    transition: str
    preset: tuple[int, ...]
    local_config: frozenset[int]
    local_cost: Fraction
    marking: Marking
    heuristic: Optional[Fraction] = None
    postset: tuple[int, ...] = ()


def adequate_key(event: UnfEvent, variant: Variant) -> Key:
    if variant is Variant.FOLDA_H:
        if event.heuristic is None:
            raise InvariantViolation(f"event {event.id} has no heuristic value")
        return event.local_cost + event.heuristic, event.id
    return event.local_cost, event.id


@dataclass
class BranchingProcess:
    sp: SyncProduct
    variant: Variant = Variant.FOLDA_N
    conditions: dict[int, Condition] = field(default_factory=dict)
    events: dict[int, UnfEvent] = field(default_factory=dict)
    co: dict[int, set[int]] = field(default_factory=dict)
    by_place: dict[str, set[int]] = field(default_factory=dict)
    by_marking: dict[Marking, int] = field(default_factory=dict)
    cutoffs: set[int] = field(default_factory=set)
    consumers: dict[int, set[int]] = field(default_factory=dict)
    presets: set[tuple[str, frozenset[int]]] = field(default_factory=set)
    # conditions produced by cut-off events take part in no extension
    dead: set[int] = field(default_factory=set)
    next_condition: int = 0
    next_event: int = 0

    @property
    def initial_conditions(self) -> list[int]:
        return [c.id for c in self.conditions.values() if c.input_event is None]

    def add_condition(self, place: str, input_event: Optional[int]) -> Condition:
        condition = Condition(self.next_condition, place, input_event)
        self.next_condition += 1
        self.conditions[condition.id] = condition
        self.by_place.setdefault(place, set()).add(condition.id)
        self.consumers[condition.id] = set()
        return condition

    def new_event_id(self) -> int:
        eid = self.next_event
        self.next_event += 1
        return eid

    def append(self, event: UnfEvent) -> list[int]:
        """Add ``event`` and one condition per token of its transition's postset."""
        self.events[event.id] = event
        for b in event.preset:
            self.consumers[b].add(event.id)
        common = set.intersection(*(self.co[b] for b in event.preset)) if event.preset else set()
        created: list[int] = []
        for place, n in self.sp.net.postset[event.transition].items:
            for _ in range(n):
                created.append(self.add_condition(place, event.id).id)
        event.postset = tuple(created)
        for y in created:
            self.co[y] = (common | set(created)) - {y}
        for c in common:
            self.co[c].update(created)
        return created


def initialize(sp: SyncProduct, variant: Variant = Variant.FOLDA_N) -> BranchingProcess:
    """One condition per token of the product's initial marking."""
    bp = BranchingProcess(sp=sp, variant=variant)
    created = [
        bp.add_condition(place, None).id
        for place, n in sp.net.initial_marking.items
        for _ in range(n)
    ]
    for y in created:
        bp.co[y] = set(created) - {y}
    return bp


def _co_sets(
        bp: BranchingProcess,
        needed: list[str],
        pool: set[int],
        chosen: list[int],
        previous: Optional[str],
) -> Iterator[list[int]]:
    if not needed:
        yield chosen
        return
    place, rest = needed[0], needed[1:]
    for c in sorted(bp.by_place.get(place, set()) & pool):
        # tokens on one place are picked in id order so each set is seen once
        if place == previous and chosen and c <= chosen[-1]:
            continue
        yield from _co_sets(bp, rest, pool & bp.co[c], chosen + [c], place)


def possible_extensions(bp: BranchingProcess, new_conditions: list[int]) -> list[tuple[str, frozenset[int]]]:
    """Every ``(t, X)`` with ``X`` a co-set labelled ``•t`` that uses a new condition.

    Pairs already known to the process, appended or queued, are skipped.
    """
    sp = bp.sp
    found: list[tuple[str, frozenset[int]]] = []
    for y in sorted(new_conditions):
        if y in bp.dead:
            continue
        place = bp.conditions[y].place
        pool = bp.co[y] - bp.dead
        for t in sp.net.consumers.get(place, ()):
            remaining = sp.net.preset[t] - Marking.of([place])
            needed = [p for p, n in remaining.items for _ in range(n)]
            for chosen in _co_sets(bp, needed, pool, [], None):
                preset = frozenset([y, *chosen])
                if (t, preset) in bp.presets:
                    continue
                bp.presets.add((t, preset))
                found.append((t, preset))
    return found


def is_cutoff(bp: BranchingProcess, event: UnfEvent) -> bool:
    """True iff an event smaller in the adequate order reached the same marking."""
    other = bp.by_marking.get(event.marking)
    if other is None or other == event.id:
        return False
    return adequate_key(bp.events[other], bp.variant) < adequate_key(event, bp.variant)


def check_invariants(bp: BranchingProcess) -> None:
    """Raise :class:`InvariantViolation` if an occurrence-net law fails."""
    sp = bp.sp
    produced: dict[int, int] = {}
    for event in bp.events.values():
        for b in event.postset:
            if b in produced:
                raise InvariantViolation(f"condition {b} has two input events")
            produced[b] = event.id
            if bp.conditions[b].input_event != event.id:
                raise InvariantViolation(f"condition {b} records the wrong input event")
        for b in event.preset:
            source = bp.conditions[b].input_event
            if source is not None and source >= event.id:
                raise InvariantViolation(f"event {event.id} consumes a later condition {b}")

    seen: set[tuple[str, frozenset[int]]] = set()
    for event in bp.events.values():
        key = (event.transition, frozenset(event.preset))
        if key in seen:
            raise InvariantViolation(f"event {event.id} duplicates an existing preset")
        seen.add(key)
        if Marking.of(bp.conditions[b].place for b in event.preset) != sp.net.preset[event.transition]:
            raise InvariantViolation(f"event {event.id} preset does not match its transition")

        consumed: set[int] = set()
        for f in event.local_config:
            other = bp.events.get(f)
            if other is None:
                raise InvariantViolation(f"[e{event.id}] refers to unknown event {f}")
            for b in other.preset:
                source = bp.conditions[b].input_event
                if source is not None and source not in event.local_config:
                    raise InvariantViolation(f"[e{event.id}] is not causally closed")
                if b in consumed:
                    raise InvariantViolation(f"[e{event.id}] is not conflict-free")
                consumed.add(b)

        sequence = [bp.events[f].transition for f in sorted(event.local_config)]
        if replay(sp.net, sequence) != event.marking:
            raise InvariantViolation(f"Mark([e{event.id}]) disagrees with its replay")

    for b, partners in bp.co.items():
        if b in partners:
            raise InvariantViolation(f"condition {b} is concurrent with itself")
        for c in partners:
            if b not in bp.co[c]:
                raise InvariantViolation(f"co-relation is not symmetric on {b}, {c}")


def extract_alignment(bp: BranchingProcess, final_event: UnfEvent) -> POAlignment:
    """Causal order of ``[final_event]`` without the dummy moves."""
    sp = bp.sp
    ids = sorted(f for f in final_event.local_config if not sp.moves[bp.events[f].transition].is_dummy)
    members = set(ids)
    order = frozenset(
        (a, b)
        for b in ids
        for a in bp.events[b].local_config
        if a != b and a in members
    )
    cost = sum((sp.costs[bp.events[f].transition] for f in ids), Fraction(0))
    return POAlignment(
        moves={f: sp.moves[bp.events[f].transition] for f in ids},
        transitions={f: bp.events[f].transition for f in ids},
        order=order,
        cost=cost,
        linearization=tuple(ids),
    )


class DirectedUnfolding:
    """One alignment run; owns its branching process and queue."""

    def __init__(
            self,
            sp: SyncProduct,
            variant: Variant = Variant.FOLDA_N,
            *,
            heuristic: Optional[MarkingEquationHeuristic] = None,
            debug: bool = False,
            record_pops: bool = False,
    ):
        if not variant.is_unfolding:
            raise ValueError(f"{variant.value} is not an unfolding variant")
        self.sp = sp
        self.variant = variant
        self.heuristic = heuristic
        if variant is Variant.FOLDA_H and self.heuristic is None:
            self.heuristic = MarkingEquationHeuristic(sp)
        self.debug = debug
        self.bp = initialize(sp, variant)
        self.queue: list[tuple[Fraction, int]] = []
        self.pending: dict[int, UnfEvent] = {}
        self.pops: Optional[list[Key]] = [] if record_pops else None
        self.queued = 0
        self.visited = 0
        self.final_event: Optional[UnfEvent] = None
        self._delta = {
            t: (sp.net.postset[t].as_counter(), sp.net.preset[t].as_counter())
            for t in sp.net.transitions
        }

    def _candidate(self, transition: str, preset: frozenset[int]) -> Optional[UnfEvent]:
        bp = self.bp
        eid = bp.new_event_id()
        config = {eid}
        for b in preset:
            source = bp.conditions[b].input_event
            if source is not None:
                config |= bp.events[source].local_config
        counts = Counter(dict(self.sp.net.initial_marking.items))
        cost = Fraction(0)
        for f in config:
            t = transition if f == eid else bp.events[f].transition
            post, pre = self._delta[t]
            counts.update(post)
            counts.subtract(pre)
            cost += self.sp.costs[t]
        marking = Marking.of(counts)
        h = None
        if self.variant is Variant.FOLDA_H:
            h = self.heuristic(marking)
            if h is None:
                return None
        return UnfEvent(
            id=eid,
            transition=transition,
            preset=tuple(sorted(preset)),
            local_config=frozenset(config),
            local_cost=cost,
            marking=marking,
            heuristic=h,
        )

    def _push_extensions(self, new_conditions: list[int]) -> None:
        for transition, preset in possible_extensions(self.bp, new_conditions):
            event = self._candidate(transition, preset)
            if event is None:
                continue
            self.pending[event.id] = event
            heapq.heappush(self.queue, adequate_key(event, self.variant))
            self.queued += 1

    def metrics(self, *, elapsed: float, timed_out: bool) -> RunMetrics:
        cost = None
        if self.final_event is not None:
            cost = extract_alignment(self.bp, self.final_event).cost
        return RunMetrics(
            variant=self.variant,
            elapsed_time=elapsed,
            queued_states=self.queued,
            visited_states=self.visited,
            cost=cost,
            trace_length=len(self.sp.event_net.transitions),
            spt=self.sp.spt,
            timed_out=timed_out,
        )

    def run(self, timeout: Optional[float] = None) -> tuple[Optional[POAlignment], RunMetrics]:
        started = time.monotonic()
        deadline = None if timeout is None else started + timeout
        bp = self.bp
        self._push_extensions(bp.initial_conditions)

        while self.queue:
            if deadline is not None and time.monotonic() > deadline:
                logger.warning(
                    "Unfolding timed out",
                    extra={"variant": self.variant.value, "queued": self.queued, "visited": self.visited},
                )
                return None, self.metrics(elapsed=time.monotonic() - started, timed_out=True)

            key = heapq.heappop(self.queue)
            event = self.pending.pop(key[1])
            if not event.local_config.isdisjoint(bp.cutoffs):
                continue
            if self.pops is not None:
                self.pops.append(key)

            created = bp.append(event)
            self.visited += 1
            if self.debug:
                check_invariants(bp)

            if event.transition == DUMMY_END and event.marking == self.sp.net.final_marking:
                self.final_event = event
                alignment = extract_alignment(bp, event)
                metrics = self.metrics(elapsed=time.monotonic() - started, timed_out=False)
                logger.debug(
                    "Unfolding reached the final marking",
                    extra={"variant": self.variant.value, "queued": self.queued,
                           "visited": self.visited, "cost": str(alignment.cost)},
                )
                return alignment, metrics

            if is_cutoff(bp, event):
                bp.cutoffs.add(event.id)
                bp.dead.update(created)
                continue
            bp.by_marking[event.marking] = event.id
            self._push_extensions(created)

        raise NoAlignmentError(no_alignment_reason(self.sp, get_settings().brute_force_bound))


def unfold_align(
        sp: SyncProduct,
        variant: Variant = Variant.FOLDA_N,
        timeout: Optional[float] = None,
        *,
        heuristic: Optional[MarkingEquationHeuristic] = None,
        debug: Optional[bool] = None,
) -> tuple[Optional[POAlignment], RunMetrics]:
    """Optimal partial-order alignment, or ``None`` with ``timed_out`` metrics."""
    settings = get_settings()
    if debug is None:
        debug = settings.debug_checks
    if timeout is None:
        timeout = settings.align_timeout
    unfolding = DirectedUnfolding(sp, variant, heuristic=heuristic, debug=debug)
    return unfolding.run(timeout)
