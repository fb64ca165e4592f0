#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Sequential aligners over the reachability graph of a synchronous product.

Dijkstra and A* share one best-first loop keyed by ``(f, tiebreak)``; a
marking is closed the first time it is popped. The exhaustive oracle builds
the whole reachability graph and computes exact costs-to-go with networkx.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Callable, Optional
from collections import deque
import heapq
import time

import networkx as nx

from folda.core.di import get_settings
from folda.core.errors import BoundExceededError, NoAlignmentError
from folda.core.log import get_logger
from folda.domain.alignment import SequentialAlignment
from folda.domain.heuristic import MarkingEquationHeuristic
from folda.domain.nets import Marking, enabled, fire
from folda.domain.product import SyncProduct, no_alignment_reason
from folda.domain.schemas import RunMetrics, Variant

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class SearchNode:
    marking: Marking
    g: Fraction
    parent: Optional["SearchNode"] = None
    via: Optional[str] = None

    def path(self) -> list[str]:
        out: list[str] = []
        node: Optional[SearchNode] = self
        while node is not None and node.via is not None:
            out.append(node.via)
            node = node.parent
        out.reverse()
        return out


@dataclass
class BestFirstSearch:
    sp: SyncProduct
    variant: Variant = Variant.DIJKSTRA
    heuristic: Optional[Callable[[Marking], Optional[Fraction]]] = None
    record_pops: bool = False
    queued: int = 0
    visited: int = 0
    pops: list[tuple[Fraction, Fraction]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.variant is Variant.ASTAR and self.heuristic is None:
            self.heuristic = MarkingEquationHeuristic(self.sp)

    def _h(self, marking: Marking) -> Optional[Fraction]:
        if self.variant is Variant.ASTAR:
            return self.heuristic(marking)
        return Fraction(0)

    def _metrics(self, elapsed: float, cost: Optional[Fraction], timed_out: bool) -> RunMetrics:
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

    def run(self, timeout: Optional[float] = None) -> tuple[Optional[SequentialAlignment], RunMetrics]:
        sp = self.sp
        started = time.monotonic()
        deadline = None if timeout is None else started + timeout
        tiebreak = count()
        frontier: list[tuple[Fraction, int, SearchNode]] = []
        best_g: dict[Marking, Fraction] = {}
        closed: set[Marking] = set()

        start = sp.net.initial_marking
        h = self._h(start)
        if h is not None:
            heapq.heappush(frontier, (h, next(tiebreak), SearchNode(start, Fraction(0))))
            best_g[start] = Fraction(0)
            self.queued += 1

        while frontier:
            if deadline is not None and time.monotonic() > deadline:
                logger.warning(
                    "Search timed out",
                    extra={"variant": self.variant.value, "queued": self.queued, "visited": self.visited},
                )
                return None, self._metrics(time.monotonic() - started, None, True)

            f, _, node = heapq.heappop(frontier)
            if node.marking in closed:
                continue
            closed.add(node.marking)
            self.visited += 1
            if self.record_pops:
                self.pops.append((f, node.g))

            if node.marking == sp.net.final_marking:
                transitions = tuple(t for t in node.path() if not sp.moves[t].is_dummy)
                alignment = SequentialAlignment(
                    transitions=transitions,
                    kinds=tuple(sp.moves[t] for t in transitions),
                    cost=node.g,
                )
                logger.debug(
                    "Search reached the final marking",
                    extra={"variant": self.variant.value, "queued": self.queued,
                           "visited": self.visited, "cost": str(node.g)},
                )
                return alignment, self._metrics(time.monotonic() - started, node.g, False)

            for t in sorted(enabled(sp.net, node.marking)):
                successor = fire(sp.net, node.marking, t)
                if successor in closed:
                    continue
                g = node.g + sp.costs[t]
                if g >= best_g.get(successor, g + 1):
                    continue
                h = self._h(successor)
                if h is None:
                    continue
                best_g[successor] = g
                heapq.heappush(frontier, (g + h, next(tiebreak), SearchNode(successor, g, node, t)))
                self.queued += 1

        raise NoAlignmentError(no_alignment_reason(sp, get_settings().brute_force_bound))


def _run(sp, variant, timeout, heuristic) -> tuple[Optional[SequentialAlignment], RunMetrics]:
    if timeout is None:
        timeout = get_settings().align_timeout
    return BestFirstSearch(sp, variant, heuristic).run(timeout)


def dijkstra_align(
        sp: SyncProduct,
        timeout: Optional[float] = None,
) -> tuple[Optional[SequentialAlignment], RunMetrics]:
    return _run(sp, Variant.DIJKSTRA, timeout, None)


def astar_align(
        sp: SyncProduct,
        timeout: Optional[float] = None,
        *,
        heuristic: Optional[MarkingEquationHeuristic] = None,
) -> tuple[Optional[SequentialAlignment], RunMetrics]:
    return _run(sp, Variant.ASTAR, timeout, heuristic)


def reachability_graph(sp: SyncProduct, bound: Optional[int] = None) -> nx.MultiDiGraph:
    """Every marking reachable from the product's initial marking.

    Edges carry the fired ``transition`` and its ``cost``; raises
    :class:`BoundExceededError` past ``bound`` markings.
    """
    if bound is None:
        bound = get_settings().brute_force_bound
    graph = nx.MultiDiGraph()
    start = sp.net.initial_marking
    graph.add_node(start)
    queue = deque([start])
    while queue:
        marking = queue.popleft()
        for t in sorted(enabled(sp.net, marking)):
            successor = fire(sp.net, marking, t)
            if successor not in graph:
                if graph.number_of_nodes() >= bound:
                    raise BoundExceededError(bound)
                graph.add_node(successor)
                queue.append(successor)
            graph.add_edge(marking, successor, key=t, transition=t, cost=sp.costs[t])
    return graph


def remaining_costs(sp: SyncProduct, bound: Optional[int] = None) -> dict[Marking, Fraction]:
    """Exact minimum cost to the final marking for every marking that can reach it."""
    graph = reachability_graph(sp, bound)
    final = sp.net.final_marking
    if final not in graph:
        return {}
    lengths = nx.single_source_dijkstra_path_length(graph.reverse(copy=False), final, weight="cost")
    return {m: Fraction(v) for m, v in lengths.items()}


def brute_force_optimal_cost(sp: SyncProduct, bound: Optional[int] = None) -> Optional[Fraction]:
    """Optimal alignment cost by exhaustive enumeration, ``None`` if no alignment exists."""
    return remaining_costs(sp, bound).get(sp.net.initial_marking)
