#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""Alignments returned by the aligners.

The unfolding produces a :class:`POAlignment` whose order is the causal order
of the winning configuration; the baselines produce a
:class:`SequentialAlignment`. Both expose the same read-only surface used by
the CLI and the tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping
from collections import Counter

import networkx as nx

from folda.domain.product import MoveKind, MoveType


@dataclass(frozen=True, eq=False)
class POAlignment:
    moves: Mapping[int, MoveKind]
    transitions: Mapping[int, str]
    order: frozenset[tuple[int, int]]
    cost: Fraction
    linearization: tuple[int, ...]

    @cached_property
    def _graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.moves))
        graph.add_edges_from(sorted(self.order))
        return graph

    @cached_property
    def covering(self) -> frozenset[tuple[int, int]]:
        """Hasse diagram of ``order``."""
        return frozenset(nx.transitive_reduction(self._graph).edges())

    def precedes(self, a: int, b: int) -> bool:
        return (a, b) in self.order

    def concurrent(self, a: int, b: int) -> bool:
        return a != b and not self.precedes(a, b) and not self.precedes(b, a)

    @property
    def sequence(self) -> tuple[str, ...]:
        """Product transitions along the witness linearisation."""
        return tuple(self.transitions[i] for i in self.linearization)

    @property
    def kinds(self) -> tuple[MoveKind, ...]:
        return tuple(self.moves[i] for i in self.linearization)

    def __len__(self) -> int:
        return len(self.moves)


@dataclass(frozen=True, eq=False)
class SequentialAlignment:
    transitions: tuple[str, ...]
    kinds: tuple[MoveKind, ...]
    cost: Fraction

    @property
    def sequence(self) -> tuple[str, ...]:
        return self.transitions

    def __len__(self) -> int:
        return len(self.transitions)


Alignment = POAlignment | SequentialAlignment


def move_counts(alignment: Alignment) -> Counter:
    """Moves per :class:`MoveType`, silent model moves counted apart."""
    counts: Counter = Counter()
    for kind in alignment.kinds:
        counts["silent" if kind.is_silent else kind.type.value] += 1
    return counts


def summarize(alignment: Alignment) -> str:
    counts = move_counts(alignment)
    parts = [f"{counts[k]} {k}" for k in (MoveType.SYNC.value, MoveType.LOG.value,
                                         MoveType.MODEL.value, "silent") if counts[k]]
    return ", ".join(parts) if parts else "no moves"
