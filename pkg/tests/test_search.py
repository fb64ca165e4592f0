#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from fractions import Fraction

import pytest

from folda.core.errors import BoundExceededError, NoAlignmentError
from folda.domain.nets import PetriNet, Trace
from folda.domain.pipeline import product_for
from folda.domain.product import DUMMY_END, DUMMY_START, check_alignment
from folda.domain.schemas import Variant
from folda.domain.search import (
    BestFirstSearch,
    astar_align,
    brute_force_optimal_cost,
    dijkstra_align,
    reachability_graph,
    remaining_costs,
)

from conftest import single_transition_model

ALIGNERS = [dijkstra_align, astar_align]


@pytest.mark.parametrize("align", ALIGNERS)
def test_diamond_cost_zero(diamond_sp, diamond_po_trace, align):
    alignment, metrics = align(diamond_sp, timeout=30)
    assert alignment.cost == 0
    assert len(alignment) == 4
    assert check_alignment(diamond_sp, alignment.sequence, diamond_po_trace) == 0
    assert metrics.cost == 0
    assert metrics.visited_states <= metrics.queued_states


@pytest.mark.parametrize("align", ALIGNERS)
def test_booking_cost(booking_sp, align):
    alignment, _ = align(booking_sp, timeout=30)
    assert alignment.cost == 1 + Fraction(2, 10000)
    assert not any(t in (DUMMY_START, DUMMY_END) for t in alignment.sequence)


@pytest.mark.parametrize("align", ALIGNERS)
def test_unbounded_net(unbounded, align):
    trace = Trace.sequential(["SubmitPD", "MakeBk"])
    sp = product_for(unbounded, trace, 10000)
    alignment, _ = align(sp, timeout=30)
    assert alignment.cost == 0
    assert check_alignment(sp, alignment.sequence, trace) == 0


@pytest.mark.parametrize("align", ALIGNERS)
def test_unreachable_final_marking(align):
    model = PetriNet.build(["i", "o", "x"], {"t": "A"}, [("i", "t"), ("t", "o")], ["i"], ["x"])
    sp = product_for(model, Trace.sequential(["A"]), 10000)
    with pytest.raises(NoAlignmentError, match="not easy sound"):
        align(sp, timeout=30)


def test_timeout(booking_sp):
    alignment, metrics = dijkstra_align(booking_sp, timeout=-1.0)
    assert alignment is None
    assert metrics.timed_out
    assert metrics.variant is Variant.DIJKSTRA


def test_dijkstra_pops_nondecreasing(booking_sp):
    search = BestFirstSearch(booking_sp, Variant.DIJKSTRA, record_pops=True)
    search.run(timeout=30)
    costs = [g for _, g in search.pops]
    assert costs == sorted(costs)


def test_astar_pops_nondecreasing_f(booking_sp):
    search = BestFirstSearch(booking_sp, Variant.ASTAR, record_pops=True)
    search.run(timeout=30)
    keys = [f for f, _ in search.pops]
    assert keys == sorted(keys)


def test_brute_force_matches_examples(diamond_sp, booking_sp):
    assert brute_force_optimal_cost(diamond_sp) == 0
    assert brute_force_optimal_cost(booking_sp) == 1 + Fraction(2, 10000)


def test_brute_force_empty_trace():
    sp = product_for(single_transition_model(), Trace.sequential([]), 10000)
    assert brute_force_optimal_cost(sp) == 1


def test_brute_force_no_alignment():
    model = PetriNet.build(["i", "o", "x"], {"t": "A"}, [("i", "t"), ("t", "o")], ["i"], ["x"])
    sp = product_for(model, Trace.sequential(["A"]), 10000)
    assert brute_force_optimal_cost(sp) is None
    assert remaining_costs(sp) == {}


def test_brute_force_bound(unbounded):
    sp = product_for(unbounded, Trace.sequential(["SubmitPD", "MakeBk"]), 10000)
    with pytest.raises(BoundExceededError):
        brute_force_optimal_cost(sp, bound=50)


def test_reachability_graph_edges(booking_sp):
    graph = reachability_graph(booking_sp)
    start = booking_sp.net.initial_marking
    assert [key for _, _, key in graph.out_edges(start, keys=True)] == [DUMMY_START]
    assert booking_sp.net.final_marking in graph
