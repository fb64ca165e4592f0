#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from fractions import Fraction
import itertools

import pytest

from folda.core.errors import InvariantViolation
from folda.domain.generator import generate_model, inject_deviation, make_spec, simulate_traces
from folda.domain.heuristic import (
    IncidenceMatrix,
    LPStatus,
    MarkingEquationHeuristic,
    cached_h,
    inner_marking,
    marking_equation_lower_bound,
    solve_marking_equation,
)
from folda.domain.nets import Marking, Trace, event_places, fire
from folda.domain.pipeline import product_for
from folda.domain.product import DUMMY_START
from folda.domain.schemas import DeviationPlacement
from folda.domain.search import reachability_graph, remaining_costs

from conftest import single_transition_model


def test_incidence_matrix_shape(diamond_sp):
    incidence = IncidenceMatrix.of(diamond_sp)
    assert incidence.matrix.shape == (len(diamond_sp.net.places) - 2, 20)
    j = incidence.transitions.index("mm:t1")
    column = dict(zip(incidence.places, incidence.matrix[:, j].tolist()))
    assert column["m:i"] == -1
    assert column["m:p1"] == 1
    assert column["m:p2"] == 1


def test_zero_for_perfectly_fitting_trace(diamond_sp):
    solution = marking_equation_lower_bound(diamond_sp, diamond_sp.net.initial_marking)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.objective == 0


def test_firing_vector_solves_the_equation(diamond_sp):
    incidence = IncidenceMatrix.of(diamond_sp)
    solution = marking_equation_lower_bound(diamond_sp, diamond_sp.net.initial_marking)
    residual = incidence.apply(diamond_sp.inner_initial, solution.firing_vector)
    assert residual == incidence.vector(diamond_sp.inner_final).tolist()
    assert all(x >= 0 for x in solution.firing_vector.values())


def test_sink_marking_is_zero(diamond_sp):
    h = MarkingEquationHeuristic(diamond_sp)
    assert h(diamond_sp.net.final_marking) == 0


def test_inner_marking_maps_source(diamond_sp):
    assert inner_marking(diamond_sp, diamond_sp.net.initial_marking) == diamond_sp.inner_initial
    after_start = fire(diamond_sp.net, diamond_sp.net.initial_marking, DUMMY_START)
    assert inner_marking(diamond_sp, after_start) == after_start


def test_empty_trace_against_one_transition():
    sp = product_for(single_transition_model(), Trace.sequential([]), 10000)
    h = MarkingEquationHeuristic(sp)
    assert h(sp.net.initial_marking) == 1


def test_missing_event_bound(booking_sp):
    h = MarkingEquationHeuristic(booking_sp)
    assert h(booking_sp.net.initial_marking) == 1 + Fraction(2, 10000)


def test_infeasible_equation():
    sp = product_for(single_transition_model(), Trace.sequential([]), 10000)
    incidence = IncidenceMatrix.of(sp)
    costs = [sp.costs[t] for t in incidence.transitions]
    # a token on the final model place cannot be removed again
    empty = "l:" + event_places(Trace.sequential([]))[("empty",)]
    start = Marking.of(["m:o", "m:o", empty])
    solution = solve_marking_equation(incidence, costs, start, sp.inner_final)
    assert solution.status is LPStatus.INFEASIBLE


def test_cache_counts_hits(diamond_sp):
    h = MarkingEquationHeuristic(diamond_sp)
    first = h(diamond_sp.net.initial_marking)
    second = h(diamond_sp.net.initial_marking)
    assert first == second
    assert h.solves == 1
    assert h.hits == 1
    assert len(h) == 1


def test_cache_bound_to_product(diamond_sp, booking_sp):
    h = MarkingEquationHeuristic(diamond_sp)
    assert cached_h(h, diamond_sp, diamond_sp.net.initial_marking) == 0
    with pytest.raises(InvariantViolation):
        cached_h(h, booking_sp, booking_sp.net.initial_marking)


def test_admissible_on_every_reachable_marking(booking_sp):
    h = MarkingEquationHeuristic(booking_sp)
    for marking, exact in remaining_costs(booking_sp).items():
        value = h(marking)
        assert value is not None
        assert value <= exact


def test_consistent_along_edges(booking_sp):
    h = MarkingEquationHeuristic(booking_sp)
    graph = reachability_graph(booking_sp)
    for src, dst, data in graph.edges(data=True):
        hs, hd = h(src), h(dst)
        if hs is None or hd is None:
            continue
        assert hs <= data["cost"] + hd


ADMISSIBILITY_SPECS = [
    {"construct": "C", "breadth": 2, "depth": 2},
    {"construct": "E", "breadth": 3, "depth": 1},
    {"construct": "L", "breadth": 1, "depth": 2},
    {"construct": "CN", "breadth": 2, "depth": 1, "nesting_factor": 1, "nesting_breadth": 2, "nesting_depth": 1},
    {"construct": "EN", "breadth": 2, "depth": 1, "nesting_factor": 1, "nesting_breadth": 2, "nesting_depth": 1},
]


@pytest.mark.slow
def test_admissible_across_generated_products():
    products = markings = 0
    for fields in ADMISSIBILITY_SPECS:
        for seed in (3, 11):
            spec = make_spec(seed=seed, **fields)
            net = generate_model(spec)
            for trace in simulate_traces(net, 3, seed=seed, max_len=6):
                for placement in (DeviationPlacement.NONE, DeviationPlacement.END):
                    sp = product_for(net, inject_deviation(trace, placement), 10000)
                    h = MarkingEquationHeuristic(sp)
                    exact = remaining_costs(sp, bound=50_000)
                    assert h(sp.net.final_marking) == 0
                    for marking, cost in itertools.islice(exact.items(), 40):
                        value = h(marking)
                        assert value is not None, (net.name, marking)
                        assert value <= cost, (net.name, marking, value, cost)
                        markings += 1
                    products += 1
    assert products >= 50
    assert markings >= 500
