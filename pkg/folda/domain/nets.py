#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Place/transition nets with multiset markings, traces and event nets.

The model, the event net of a trace and their synchronous product all share
:class:`PetriNet`. Nets are immutable; firing returns a new :class:`Marking`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence
from collections import Counter

import networkx as nx

from folda.core.errors import CyclicOrderError, InvalidNetError, NotEnabledError

SILENT = None


@dataclass(frozen=True, slots=True)
class Marking:
    """Canonical multiset of places: sorted by place id, zero counts omitted."""

    items: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, tokens: Mapping[str, int] | Iterable[str] = ()) -> "Marking":
        counts = Counter()
        if isinstance(tokens, Mapping):
            for place, n in tokens.items():
                if n < 0:
                    raise InvalidNetError(f"negative token count {n} on place {place!r}")
                counts[place] += n
        else:
            counts.update(tokens)
        return cls(tuple(sorted((p, n) for p, n in counts.items() if n > 0)))

    def __getitem__(self, place: str) -> int:
        for p, n in self.items:
            if p == place:
                return n
        return 0

    def __iter__(self) -> Iterator[str]:
        for p, _ in self.items:
            yield p

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        return "[" + ", ".join(p if n == 1 else f"{p}^{n}" for p, n in self.items) + "]"

    @property
    def places(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.items)

    @property
    def total(self) -> int:
        return sum(n for _, n in self.items)

    def as_counter(self) -> Counter:
        return Counter(dict(self.items))

    def covers(self, other: "Marking") -> bool:
        mine = dict(self.items)
        return all(mine.get(p, 0) >= n for p, n in other.items)

    def __add__(self, other: "Marking") -> "Marking":
        counts = self.as_counter()
        counts.update(dict(other.items))
        return Marking.of(counts)

    def __sub__(self, other: "Marking") -> "Marking":
        if not self.covers(other):
            raise InvalidNetError(f"cannot subtract {other} from {self}")
        counts = self.as_counter()
        counts.subtract(dict(other.items))
        return Marking.of(counts)


@dataclass(frozen=True)
class PetriNet:
    places: frozenset[str]
    transitions: frozenset[str]
    labels: Mapping[str, Optional[str]]
    arcs: frozenset[tuple[str, str]]
    initial_marking: Marking
    final_marking: Marking
    name: str = "net"
    # arc multiplicities above 1; only the product's dummy arcs need them
    weights: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.places & self.transitions:
            clash = sorted(self.places & self.transitions)
            raise InvalidNetError(f"ids used for both places and transitions: {clash}")
        nodes = self.places | self.transitions
        for src, dst in self.arcs:
            if src not in nodes or dst not in nodes:
                raise InvalidNetError(f"arc {src}->{dst} references an unknown node")
            if (src in self.places) == (dst in self.places):
                raise InvalidNetError(f"arc {src}->{dst} must connect a place and a transition")
        for which, marking in (("initial", self.initial_marking), ("final", self.final_marking)):
            unknown = marking.places - self.places
            if unknown:
                raise InvalidNetError(f"{which} marking uses unknown places {sorted(unknown)}")
        missing = self.transitions - set(self.labels)
        if missing:
            raise InvalidNetError(f"transitions without a label entry: {sorted(missing)}")
        for arc, weight in self.weights.items():
            if arc not in self.arcs or weight < 1:
                raise InvalidNetError(f"invalid weight {weight} on arc {arc[0]}->{arc[1]}")

    @classmethod
    def build(
            cls,
            places: Iterable[str],
            transitions: Mapping[str, Optional[str]],
            arcs: Iterable[tuple[str, str]],
            initial: Mapping[str, int] | Iterable[str],
            final: Mapping[str, int] | Iterable[str],
            name: str = "net",
    ) -> "PetriNet":
        return cls(
            places=frozenset(places),
            transitions=frozenset(transitions),
            labels=dict(transitions),
            arcs=frozenset(arcs),
            initial_marking=Marking.of(initial),
            final_marking=Marking.of(final),
            name=name,
        )

    def weight(self, src: str, dst: str) -> int:
        return self.weights.get((src, dst), 1)

    @cached_property
    def preset(self) -> dict[str, Marking]:
        pre: dict[str, Counter] = {t: Counter() for t in self.transitions}
        for src, dst in self.arcs:
            if dst in pre:
                pre[dst][src] += self.weight(src, dst)
        return {t: Marking.of(ps) for t, ps in pre.items()}

    @cached_property
    def postset(self) -> dict[str, Marking]:
        post: dict[str, Counter] = {t: Counter() for t in self.transitions}
        for src, dst in self.arcs:
            if src in post:
                post[src][dst] += self.weight(src, dst)
        return {t: Marking.of(ps) for t, ps in post.items()}

    @cached_property
    def consumers(self) -> dict[str, tuple[str, ...]]:
        """Transitions consuming from each place, sorted by id."""
        out: dict[str, list[str]] = {p: [] for p in self.places}
        for src, dst in self.arcs:
            if src in out:
                out[src].append(dst)
        return {p: tuple(sorted(ts)) for p, ts in out.items()}

    @cached_property
    def unguarded(self) -> tuple[str, ...]:
        """Transitions with an empty preset."""
        return tuple(t for t in sorted(self.transitions) if not self.preset[t])

    @cached_property
    def sorted_transitions(self) -> tuple[str, ...]:
        return tuple(sorted(self.transitions))

    def label(self, transition: str) -> Optional[str]:
        return self.labels[transition]

    def is_silent(self, transition: str) -> bool:
        return self.labels[transition] is SILENT


def enabled(net: PetriNet, marking: Marking) -> frozenset[str]:
    candidates = set(net.unguarded)
    for place in marking:
        candidates.update(net.consumers.get(place, ()))
    return frozenset(t for t in candidates if marking.covers(net.preset[t]))


def fire(net: PetriNet, marking: Marking, transition: str) -> Marking:
    pre = net.preset[transition]
    if not marking.covers(pre):
        raise NotEnabledError(transition)
    counts = marking.as_counter()
    counts.subtract(dict(pre.items))
    counts.update(dict(net.postset[transition].items))
    return Marking.of(counts)


def replay(net: PetriNet, sequence: Sequence[str], start: Optional[Marking] = None) -> Marking:
    marking = net.initial_marking if start is None else start
    for index, transition in enumerate(sequence):
        try:
            marking = fire(net, marking, transition)
        except NotEnabledError:
            raise NotEnabledError(transition, index) from None
    return marking


@dataclass(frozen=True)
class Trace:
    """A trace whose events are ordered by a strict partial order.

    Sequential traces are the special case of a chain; ``order`` holds the
    generating edges, :meth:`precedes` answers the transitive closure.
    """

    events: tuple[tuple[str, str], ...]
    order: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        ids = [eid for eid, _ in self.events]
        if len(set(ids)) != len(ids):
            raise InvalidNetError("duplicate event ids in trace")
        for eid, activity in self.events:
            if not activity:
                raise InvalidNetError(f"event {eid!r} has an empty activity name")
        known = set(ids)
        for x, y in self.order:
            if x not in known or y not in known:
                raise InvalidNetError(f"order edge {x}<{y} references an unknown event")
        graph = self._graph
        if not nx.is_directed_acyclic_graph(graph):
            cycle = [u for u, _ in nx.find_cycle(graph)]
            raise CyclicOrderError(cycle)

    @classmethod
    def sequential(cls, activities: Iterable[str]) -> "Trace":
        events = tuple((f"e{i}", a) for i, a in enumerate(activities, start=1))
        order = frozenset((events[i][0], events[i + 1][0]) for i in range(len(events) - 1))
        return cls(events, order)

    @classmethod
    def partial(cls, events: Iterable[tuple[str, str]], order: Iterable[tuple[str, str]]) -> "Trace":
        return cls(tuple(events), frozenset(order))

    @cached_property
    def _graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(eid for eid, _ in self.events)
        graph.add_edges_from(self.order)
        return graph

    @cached_property
    def closure(self) -> frozenset[tuple[str, str]]:
        return frozenset(nx.transitive_closure_dag(self._graph).edges())

    @cached_property
    def reduction(self) -> frozenset[tuple[str, str]]:
        return frozenset(nx.transitive_reduction(self._graph).edges())

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(a for _, a in self.events)

    @cached_property
    def linearized(self) -> tuple[tuple[str, str], ...]:
        """Events ranked by their number of predecessors, a linear extension of the order."""
        rank = {eid: 0 for eid, _ in self.events}
        for _, y in self.closure:
            rank[y] += 1
        return tuple(sorted(self.events, key=lambda ev: rank[ev[0]]))

    @cached_property
    def activity_of(self) -> dict[str, str]:
        return dict(self.events)

    @property
    def is_sequential(self) -> bool:
        n = len(self.events)
        return len(self.closure) == n * (n - 1) // 2

    def precedes(self, x: str, y: str) -> bool:
        return (x, y) in self.closure

    def __len__(self) -> int:
        return len(self.events)


PlaceKey = tuple[str, ...]


def event_places(trace: Trace) -> dict[PlaceKey, str]:
    """Place names of the event net keyed by role.

    Keys are ``("src", e)``, ``("snk", e)`` and ``("edge", x, y)``; the empty
    trace has the single key ``("empty",)``. Names are enumerated, never built
    from event ids, and their prefix is extended until no event id matches.
    """
    keys: list[PlaceKey] = []
    if not trace.events:
        keys.append(("empty",))
    else:
        graph = trace._graph
        for eid, _ in trace.events:
            if graph.in_degree(eid) == 0:
                keys.append(("src", eid))
            if graph.out_degree(eid) == 0:
                keys.append(("snk", eid))
        keys.extend(("edge", x, y) for x, y in sorted(trace.reduction))

    taken = {eid for eid, _ in trace.events}
    prefix = "p"
    while any(f"{prefix}{i}" in taken for i in range(len(keys))):
        prefix += "_"
    return {key: f"{prefix}{i}" for i, key in enumerate(keys)}


def build_event_net(trace: Trace, name: str = "trace") -> PetriNet:
    """One transition per event and one place per edge of the reduced order.

    Source events consume from their own initial place, sink events produce
    into their own final place. The empty trace becomes a single place that is
    both initial and final.
    """
    names = event_places(trace)
    if not trace.events:
        place = names[("empty",)]
        return PetriNet.build([place], {}, [], [place], [place], name=name)

    arcs: list[tuple[str, str]] = []
    initial: list[str] = []
    final: list[str] = []
    for key, place in names.items():
        if key[0] == "src":
            initial.append(place)
            arcs.append((place, key[1]))
        elif key[0] == "snk":
            final.append(place)
            arcs.append((key[1], place))
        else:
            arcs.extend([(key[1], place), (place, key[2])])
    return PetriNet.build(names.values(), dict(trace.events), arcs, initial, final, name=name)
