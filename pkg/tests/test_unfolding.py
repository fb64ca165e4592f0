#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from fractions import Fraction

import pytest

from folda.core.errors import NoAlignmentError
from folda.domain.alignment import move_counts, summarize
from folda.domain.nets import Marking, PetriNet, Trace
from folda.domain.pipeline import product_for
from folda.domain.product import DUMMY_START, SOURCE_PLACE, MoveType, check_alignment
from folda.domain.schemas import Variant
from folda.domain.search import brute_force_optimal_cost
from folda.domain.unfolding import (
    DirectedUnfolding,
    check_invariants,
    initialize,
    possible_extensions,
    unfold_align,
)

from conftest import unbounded_model

UNFOLDING_VARIANTS = [Variant.FOLDA_N, Variant.FOLDA_H]


def _by_activity(alignment):
    return {kind.activity: mid for mid, kind in alignment.moves.items()}


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_diamond_alignment_keeps_concurrency(diamond_sp, diamond_po_trace, variant):
    alignment, metrics = unfold_align(diamond_sp, variant, timeout=30, debug=True)
    assert alignment.cost == 0
    assert len(alignment) == 4
    assert all(kind.type is MoveType.SYNC for kind in alignment.moves.values())
    assert {kind.transition for kind in alignment.moves.values()} == {"t1", "t2", "t3", "t4"}

    ids = _by_activity(alignment)
    s, a, b, c = ids["S"], ids["A"], ids["B"], ids["C"]
    assert alignment.covering == {(s, a), (s, b), (a, c), (b, c)}
    assert alignment.concurrent(a, b)
    assert alignment.precedes(s, c)
    assert check_alignment(diamond_sp, alignment.sequence, diamond_po_trace) == 0

    assert metrics.cost == 0
    assert not metrics.timed_out
    assert metrics.visited_states <= metrics.queued_states
    assert metrics.spt == 20
    assert metrics.trace_length == 4


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_silent_moves_priced(booking_sp, variant):
    trace = Trace.sequential(["MakeBk", "SubmitPD", "AwaitC", "Sign"])
    alignment, _ = unfold_align(booking_sp, variant, timeout=30, debug=True)
    assert alignment.cost == 1 + Fraction(2, 10000)
    counts = move_counts(alignment)
    assert counts["sync"] == 4
    assert counts["model"] == 1
    assert counts["silent"] == 2
    assert summarize(alignment) == "4 sync, 1 model, 2 silent"
    assert check_alignment(booking_sp, alignment.sequence, trace) == alignment.cost


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_unbounded_net_terminates(unbounded, variant):
    trace = Trace.sequential(["SubmitPD", "MakeBk"])
    sp = product_for(unbounded, trace, 10000)
    alignment, metrics = unfold_align(sp, variant, timeout=30, debug=True)
    assert alignment.cost == 0
    assert check_alignment(sp, alignment.sequence, trace) == 0
    assert not metrics.timed_out


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_sequential_trace_gets_chain(diamond, variant):
    trace = Trace.sequential(["S", "A", "B", "C"])
    sp = product_for(diamond, trace, 10000)
    alignment, _ = unfold_align(sp, variant, timeout=30, debug=True)
    assert alignment.cost == 0
    assert check_alignment(sp, alignment.sequence, trace) == 0
    ids = _by_activity(alignment)
    assert alignment.precedes(ids["A"], ids["B"])


def test_empty_trace():
    model = PetriNet.build(["i", "o"], {"t": "A"}, [("i", "t"), ("t", "o")], ["i"], ["o"])
    sp = product_for(model, Trace.sequential([]), 10000)
    alignment, _ = unfold_align(sp, Variant.FOLDA_N, timeout=30)
    assert alignment.cost == 1
    assert [k.type for k in alignment.kinds] == [MoveType.MODEL]


def test_trace_of_unknown_activities_uses_log_moves(diamond):
    trace = Trace.sequential(["X", "Y"])
    sp = product_for(diamond, trace, 10000)
    alignment, _ = unfold_align(sp, Variant.FOLDA_N, timeout=30)
    # two log moves plus the cheapest complete model run (four visible moves)
    assert alignment.cost == 6


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_underscored_event_ids_keep_their_order(variant):
    model = PetriNet.build(
        ["i", "q1", "q2", "q3", "o"],
        {"tz": "Z", "ty": "Y", "tx": "X", "tw": "W"},
        [("i", "tz"), ("tz", "q1"), ("q1", "ty"), ("ty", "q2"),
         ("q2", "tx"), ("tx", "q3"), ("q3", "tw"), ("tw", "o")],
        ["i"], ["o"],
    )
    trace = Trace.partial(
        [("a_b", "W"), ("c", "X"), ("a", "Y"), ("b_c", "Z")],
        [("a_b", "c"), ("a", "b_c")],
    )
    sp = product_for(model, trace, 10000)
    alignment, _ = unfold_align(sp, variant, timeout=30)
    # each inverted pair needs one log move and one model move
    assert alignment.cost == 4
    assert brute_force_optimal_cost(sp) == 4
    assert check_alignment(sp, alignment.sequence, trace) == 4


def test_no_alignment_when_final_unreachable():
    model = PetriNet.build(["i", "o", "x"], {"t": "A"}, [("i", "t"), ("t", "o")], ["i"], ["x"])
    sp = product_for(model, Trace.sequential(["A"]), 10000)
    with pytest.raises(NoAlignmentError, match="model .* is not easy sound") as excinfo:
        unfold_align(sp, Variant.FOLDA_N, timeout=30)
    assert "initial marking" in excinfo.value.reason


def test_timeout_returns_metrics(booking_sp):
    unfolding = DirectedUnfolding(booking_sp, Variant.FOLDA_N)
    alignment, metrics = unfolding.run(timeout=-1.0)
    assert alignment is None
    assert metrics.timed_out
    assert metrics.cost is None


def test_initial_process(diamond_sp):
    bp = initialize(diamond_sp)
    assert [bp.conditions[c].place for c in bp.initial_conditions] == [SOURCE_PLACE]
    extensions = possible_extensions(bp, bp.initial_conditions)
    assert [t for t, _ in extensions] == [DUMMY_START]
    # the same extension is reported once
    assert possible_extensions(bp, bp.initial_conditions) == []


def test_unbounded_initialization():
    sp = product_for(unbounded_model(), Trace.sequential(["SubmitPD", "MakeBk"]), 10000)
    bp = initialize(sp)
    assert len(bp.conditions) == 1
    check_invariants(bp)


@pytest.mark.parametrize("variant", UNFOLDING_VARIANTS)
def test_pops_are_ordered(booking_sp, variant):
    unfolding = DirectedUnfolding(booking_sp, variant, debug=True, record_pops=True)
    unfolding.run(timeout=30)
    assert unfolding.pops == sorted(unfolding.pops)


def test_cutoffs_are_never_extended(booking_sp):
    unfolding = DirectedUnfolding(booking_sp, Variant.FOLDA_N, debug=True)
    unfolding.run(timeout=30)
    bp = unfolding.bp
    for event in bp.events.values():
        for b in event.preset:
            source = bp.conditions[b].input_event
            assert source not in bp.cutoffs


def test_winning_configuration_has_final_marking(booking_sp):
    unfolding = DirectedUnfolding(booking_sp, Variant.FOLDA_H)
    unfolding.run(timeout=30)
    assert unfolding.final_event.marking == booking_sp.net.final_marking
    assert unfolding.final_event.marking == Marking.of(["sp:sink"])


def test_variants_agree_on_cost(booking_sp):
    plain, _ = unfold_align(booking_sp, Variant.FOLDA_N, timeout=30)
    guided, _ = unfold_align(booking_sp, Variant.FOLDA_H, timeout=30)
    assert plain.cost == guided.cost


def test_rejects_sequential_variant(booking_sp):
    with pytest.raises(ValueError):
        DirectedUnfolding(booking_sp, Variant.DIJKSTRA)
