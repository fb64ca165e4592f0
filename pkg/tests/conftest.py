#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

import logging

import pytest

from folda.core.di import settings_override
from folda.domain.nets import PetriNet, Trace
from folda.domain.pipeline import product_for
from folda.domain.product import SyncProduct


def concurrent_and_sequential_model() -> PetriNet:
    """S then A and B in parallel then C, next to a branch doing S, A, B, C in sequence."""
    return PetriNet.build(
        ["i", "p1", "p2", "p3", "p4", "q1", "q2", "q3", "o"],
        {"t1": "S", "t2": "A", "t3": "B", "t4": "C", "t5": "S", "t6": "A", "t7": "B", "t8": "C"},
        [
            ("i", "t1"), ("t1", "p1"), ("t1", "p2"),
            ("p1", "t2"), ("t2", "p3"),
            ("p2", "t3"), ("t3", "p4"),
            ("p3", "t4"), ("p4", "t4"), ("t4", "o"),
            ("i", "t5"), ("t5", "q1"),
            ("q1", "t6"), ("t6", "q2"),
            ("q2", "t7"), ("t7", "q3"),
            ("q3", "t8"), ("t8", "o"),
        ],
        ["i"], ["o"], name="diamond",
    )


def diamond_trace() -> Trace:
    return Trace.partial(
        [("e1", "S"), ("e2", "A"), ("e3", "B"), ("e4", "C")],
        [("e1", "e2"), ("e1", "e3"), ("e2", "e4"), ("e3", "e4")],
    )


def booking_model() -> PetriNet:
    """MakeBk, a silent split into SubmitPD and SubmitPoE, a silent join, AwaitC, Sign."""
    return PetriNet.build(
        ["i", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "o"],
        {"MakeBk": "MakeBk", "t1": None, "SubmitPD": "SubmitPD", "SubmitPoE": "SubmitPoE",
         "t2": None, "AwaitC": "AwaitC", "Sign": "Sign"},
        [
            ("i", "MakeBk"), ("MakeBk", "p1"),
            ("p1", "t1"), ("t1", "p2"), ("t1", "p3"),
            ("p2", "SubmitPD"), ("SubmitPD", "p4"),
            ("p3", "SubmitPoE"), ("SubmitPoE", "p5"),
            ("p4", "t2"), ("p5", "t2"), ("t2", "p6"),
            ("p6", "AwaitC"), ("AwaitC", "p7"),
            ("p7", "Sign"), ("Sign", "o"),
        ],
        ["i"], ["o"], name="booking",
    )


def unbounded_model() -> PetriNet:
    """SubmitPD keeps its input token and adds one to ``p`` every time it fires."""
    return PetriNet.build(
        ["i", "p", "o"],
        {"SubmitPD": "SubmitPD", "MakeBk": "MakeBk"},
        [("i", "SubmitPD"), ("SubmitPD", "i"), ("SubmitPD", "p"), ("p", "MakeBk"), ("MakeBk", "o")],
        ["i"], ["i", "o"], name="unbounded",
    )


def single_transition_model(label: str = "A") -> PetriNet:
    return PetriNet.build(["i", "o"], {"t": label}, [("i", "t"), ("t", "o")], ["i"], ["o"], name="single")


@pytest.fixture
def diamond() -> PetriNet:
    return concurrent_and_sequential_model()


@pytest.fixture
def diamond_po_trace() -> Trace:
    return diamond_trace()


@pytest.fixture
def diamond_sp(diamond, diamond_po_trace) -> SyncProduct:
    return product_for(diamond, diamond_po_trace, 10000)


@pytest.fixture
def booking() -> PetriNet:
    return booking_model()


@pytest.fixture
def booking_sp(booking) -> SyncProduct:
    return product_for(booking, Trace.sequential(["MakeBk", "SubmitPD", "AwaitC", "Sign"]), 10000)


@pytest.fixture
def unbounded() -> PetriNet:
    return unbounded_model()


@pytest.fixture
def test_settings():
    with settings_override(align_timeout=30.0, debug_checks=True, app_env="testing") as settings:
        yield settings


@pytest.fixture(autouse=True)
def _drop_cli_log_handlers():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_folda_configured", False):
            root.removeHandler(handler)
