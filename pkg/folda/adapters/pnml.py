#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
PNML place/transition nets.

Read: ``place`` (``initialMarking``), ``transition`` (``name``), ``arc``
(``inscription``) anywhere under ``net``, namespaces ignored. A transition is
silent when its name is absent, empty or starts with ``tau``, or when it
carries a ``toolspecific`` element with ``activity="$invisible$"``. The final
marking comes from ``finalmarkings/marking`` or, failing that, from a sidecar
file ``<model>.pnml.final`` listing one ``place [count]`` per line.

Write: the same layout with a single ``page`` and ``finalmarkings``.
"""
from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterator, Optional
import xml.etree.ElementTree as ET

from folda.core.errors import InvalidNetError, MissingFinalMarkingError, ParseError
from folda.core.log import get_logger
from folda.domain.nets import Marking, PetriNet

logger = get_logger(__name__)

PTNET_TYPE = "http://www.pnml.org/version-2009/grammars/ptnet"
INVISIBLE = "$invisible$"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _child(element: ET.Element, name: str) -> Optional[ET.Element]:
    for child in element:
        if _local(child.tag) == name:
            return child
    return None


def _text(element: Optional[ET.Element]) -> Optional[str]:
    """``element/text`` content, stripped."""
    if element is None:
        return None
    text = _child(element, "text")
    if text is None or text.text is None:
        return None
    return text.text.strip()


def _count(element: Optional[ET.Element], source: str, what: str) -> int:
    raw = _text(element)
    if raw is None or raw == "":
        return 0 if what == "initialMarking" else 1
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{what} {raw!r} is not an integer", source=source) from None
    if value < 0:
        raise ParseError(f"{what} {value} is negative", source=source)
    return value


def _walk(element: ET.Element) -> Iterator[ET.Element]:
    """Elements below ``element``; final markings are yielded but not entered."""
    for child in element:
        yield child
        if _local(child.tag) not in ("finalmarkings", "toolspecific"):
            yield from _walk(child)


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".final")


def _read_sidecar(path: Path) -> Optional[Counter]:
    side = sidecar_path(path)
    if not side.exists():
        return None
    counts: Counter = Counter()
    for lineno, line in enumerate(side.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            counts[parts[0]] += int(parts[1]) if len(parts) > 1 else 1
        except ValueError:
            raise ParseError(f"bad token count {parts[1]!r}", source=str(side), element=f"line {lineno}") from None
    return counts


def read_pnml(path: str | Path) -> PetriNet:
    path = Path(path)
    source = str(path)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML: {exc}", source=source, element=f"line {line}, column {column}") from None
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=source) from None

    net = root if _local(root.tag) == "net" else next((e for e in root.iter() if _local(e.tag) == "net"), None)
    if net is None:
        raise ParseError("no <net> element", source=source)

    places: list[str] = []
    initial: Counter = Counter()
    transitions: dict[str, Optional[str]] = {}
    arcs: dict[tuple[str, str], int] = {}
    final: Optional[Counter] = None

    for element in _walk(net):
        tag = _local(element.tag)
        if tag in ("place", "transition"):
            ident = element.get("id")
            if not ident:
                raise ParseError(f"{tag} without id", source=source, element=tag)
            if ident in transitions or ident in places:
                raise ParseError(f"duplicate node id {ident!r}", source=source, element=f"{tag} {ident}")
            if tag == "place":
                places.append(ident)
                tokens = _count(_child(element, "initialMarking"), source, "initialMarking")
                if tokens:
                    initial[ident] = tokens
            else:
                transitions[ident] = _transition_label(element)

    nodes = set(places) | set(transitions)
    for element in _walk(net):
        tag = _local(element.tag)
        if tag == "arc":
            src, dst = element.get("source"), element.get("target")
            where = f"arc {element.get('id', '?')}"
            if src not in nodes or dst not in nodes:
                raise ParseError(f"arc {src}->{dst} references an unknown node", source=source, element=where)
            if (src in transitions) == (dst in transitions):
                raise ParseError(f"arc {src}->{dst} must connect a place and a transition",
                                 source=source, element=where)
            arcs[(src, dst)] = arcs.get((src, dst), 0) + _count(_child(element, "inscription"), source, "inscription")
        elif tag == "finalmarkings" and final is None:
            final = Counter()
            marking = _child(element, "marking")
            for place in (marking if marking is not None else []):
                if _local(place.tag) != "place":
                    continue
                ref = place.get("idref")
                if ref not in places:
                    raise ParseError(f"final marking references unknown place {ref!r}",
                                     source=source, element="finalmarkings")
                tokens = _count(place, source, "final marking")
                if tokens:
                    final[ref] += tokens

    if final is None:
        final = _read_sidecar(path)
    if final is None:
        raise MissingFinalMarkingError(source)

    name = _text(_child(net, "name")) or net.get("id") or path.stem
    try:
        result = PetriNet(
            places=frozenset(places),
            transitions=frozenset(transitions),
            labels=transitions,
            arcs=frozenset(arcs),
            initial_marking=Marking.of(initial),
            final_marking=Marking.of(final),
            name=name,
            weights={arc: n for arc, n in arcs.items() if n > 1},
        )
    except InvalidNetError as exc:
        raise ParseError(str(exc), source=source) from None
    logger.debug("Read PNML", extra={"path": source, "places": len(places), "transitions": len(transitions)})
    return result


def _transition_label(element: ET.Element) -> Optional[str]:
    for child in element:
        if _local(child.tag) == "toolspecific" and child.get("activity") == INVISIBLE:
            return None
    name = _text(_child(element, "name"))
    if not name or name.startswith("tau"):
        return None
    return name


def _sub_text(parent: ET.Element, tag: str, text: str) -> ET.Element:
    element = ET.SubElement(parent, tag)
    ET.SubElement(element, "text").text = text
    return element


def write_pnml(net: PetriNet, path: str | Path) -> Path:
    path = Path(path)
    root = ET.Element("pnml")
    net_el = ET.SubElement(root, "net", id=net.name, type=PTNET_TYPE)
    _sub_text(net_el, "name", net.name)
    page = ET.SubElement(net_el, "page", id="n0")

    initial = dict(net.initial_marking.items)
    for place in sorted(net.places):
        element = ET.SubElement(page, "place", id=place)
        _sub_text(element, "name", place)
        if initial.get(place):
            _sub_text(element, "initialMarking", str(initial[place]))

    for t in net.sorted_transitions:
        element = ET.SubElement(page, "transition", id=t)
        label = net.labels[t]
        _sub_text(element, "name", label if label is not None else t)
        if label is None:
            ET.SubElement(
                element, "toolspecific", tool="StochasticPetriNet", version="0.2", activity=INVISIBLE
            )

    for index, (src, dst) in enumerate(sorted(net.arcs)):
        element = ET.SubElement(page, "arc", id=f"a{index}", source=src, target=dst)
        weight = net.weight(src, dst)
        if weight > 1:
            _sub_text(element, "inscription", str(weight))

    marking = ET.SubElement(ET.SubElement(net_el, "finalmarkings"), "marking")
    for place, n in net.final_marking.items:
        element = ET.SubElement(marking, "place", idref=place)
        ET.SubElement(element, "text").text = str(n)

    tree = ET.ElementTree(root)
    ET.indent(tree)
    path.parent.mkdir(parents=True, exist_ok=True)
    tree.write(path, encoding="utf-8", xml_declaration=True)
    return path
