#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

import textwrap

import pytest

from folda.adapters.pnml import read_pnml, sidecar_path, write_pnml
from folda.core.errors import MissingFinalMarkingError, ParseError
from folda.domain.generator import generate_model, make_spec
from folda.domain.nets import Marking

PNML = textwrap.dedent("""\
    <?xml version="1.0" encoding="UTF-8"?>
    <pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">
      <net id="n" type="http://www.pnml.org/version-2009/grammars/ptnet">
        <name><text>booking</text></name>
        <page id="p">
          <place id="i"><initialMarking><text>1</text></initialMarking></place>
          <place id="p1"/>
          <place id="o"/>
          <transition id="t1"><name><text>MakeBk</text></name></transition>
          <transition id="t2">
            <name><text>t2</text></name>
            <toolspecific tool="StochasticPetriNet" version="0.2" activity="$invisible$"/>
          </transition>
          <arc id="a1" source="i" target="t1"/>
          <arc id="a2" source="t1" target="p1"/>
          <arc id="a3" source="p1" target="t2"><inscription><text>1</text></inscription></arc>
          <arc id="a4" source="t2" target="o"/>
        </page>
        {final}
      </net>
    </pnml>
""")

FINAL = '<finalmarkings><marking><place idref="o"><text>1</text></place></marking></finalmarkings>'


def _write(tmp_path, text, name="model.pnml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_read_pnml(tmp_path):
    net = read_pnml(_write(tmp_path, PNML.format(final=FINAL)))
    assert net.name == "booking"
    assert net.places == {"i", "p1", "o"}
    assert net.labels == {"t1": "MakeBk", "t2": None}
    assert net.initial_marking == Marking.of(["i"])
    assert net.final_marking == Marking.of(["o"])
    assert ("p1", "t2") in net.arcs


def test_final_marking_places_are_not_net_places(tmp_path):
    net = read_pnml(_write(tmp_path, PNML.format(final=FINAL)))
    assert len(net.places) == 3


def test_sidecar_final_marking(tmp_path):
    path = _write(tmp_path, PNML.format(final=""))
    sidecar_path(path).write_text("# final\no 1\n", encoding="utf-8")
    assert read_pnml(path).final_marking == Marking.of(["o"])


def test_missing_final_marking(tmp_path):
    with pytest.raises(MissingFinalMarkingError):
        read_pnml(_write(tmp_path, PNML.format(final="")))


def test_malformed_xml(tmp_path):
    with pytest.raises(ParseError) as info:
        read_pnml(_write(tmp_path, "<pnml><net>"))
    assert "line" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_pnml(tmp_path / "absent.pnml")


def test_dangling_arc(tmp_path):
    text = PNML.format(final=FINAL).replace('target="o"', 'target="zz"')
    with pytest.raises(ParseError):
        read_pnml(_write(tmp_path, text))


def test_unknown_final_place(tmp_path):
    with pytest.raises(ParseError):
        read_pnml(_write(tmp_path, PNML.format(final=FINAL.replace('idref="o"', 'idref="zz"'))))


def test_arc_weights(tmp_path):
    text = PNML.format(final=FINAL).replace(
        '<arc id="a2" source="t1" target="p1"/>',
        '<arc id="a2" source="t1" target="p1"><inscription><text>2</text></inscription></arc>',
    )
    net = read_pnml(_write(tmp_path, text))
    assert net.weight("t1", "p1") == 2
    assert net.postset["t1"] == Marking.of({"p1": 2})


def test_written_model_reads_back(tmp_path, booking):
    path = write_pnml(booking, tmp_path / "booking.pnml")
    net = read_pnml(path)
    assert net.places == booking.places
    assert net.transitions == booking.transitions
    assert dict(net.labels) == dict(booking.labels)
    assert net.arcs == booking.arcs
    assert net.initial_marking == booking.initial_marking
    assert net.final_marking == booking.final_marking


def test_writer_is_deterministic(tmp_path):
    net = generate_model(make_spec(construct="C", breadth=3, depth=5))
    first = write_pnml(net, tmp_path / "a.pnml").read_bytes()
    second = write_pnml(net, tmp_path / "b.pnml").read_bytes()
    assert first == second
    assert read_pnml(tmp_path / "a.pnml").transitions == net.transitions
