#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""Graphviz descriptions of branching processes and partial-order alignments."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

from folda.domain.alignment import Alignment, POAlignment, SequentialAlignment
from folda.domain.product import MoveKind, MoveType
from folda.domain.unfolding import BranchingProcess, UnfEvent

COLORS = {
    MoveType.SYNC: "palegreen",
    MoveType.LOG: "khaki",
    MoveType.MODEL: "lightblue",
    MoveType.DUMMY_START: "lightgray",
    MoveType.DUMMY_END: "lightgray",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def move_label(kind: MoveKind) -> str:
    """``(model-label, trace-event)`` with ``>>`` for the skipped side."""
    if kind.is_dummy:
        return "start" if kind.type is MoveType.DUMMY_START else "end"
    log_side, model_side = kind.pair()
    return f"({model_side}, {log_side})"


def _event_node(name: str, kind: MoveKind, *, cutoff: bool = False, winning: bool = False) -> str:
    attrs = [
        "shape=box",
        f"label={_quote(move_label(kind))}",
        f'style="{"filled,dashed" if cutoff else "filled"}"',
        f"fillcolor={COLORS[kind.type]}",
    ]
    if winning:
        attrs.append("penwidth=3")
    return f"  {name} [{', '.join(attrs)}];"


def branching_process_dot(bp: BranchingProcess, final_event: Optional[UnfEvent] = None) -> str:
    winning = final_event.local_config if final_event is not None else frozenset()
    lines = ["digraph unfolding {", "  rankdir=LR;"]
    for cid in sorted(bp.conditions):
        condition = bp.conditions[cid]
        lines.append(f"  c{cid} [shape=circle, label={_quote(condition.place)}];")
    for eid in sorted(bp.events):
        event = bp.events[eid]
        lines.append(_event_node(
            f"e{eid}", bp.sp.moves[event.transition],
            cutoff=eid in bp.cutoffs, winning=eid in winning,
        ))
    for eid in sorted(bp.events):
        event = bp.events[eid]
        lines.extend(f"  c{b} -> e{eid};" for b in event.preset)
        lines.extend(f"  e{eid} -> c{b};" for b in event.postset)
    lines.append("}")
    return "\n".join(lines) + "\n"


def alignment_dot(alignment: Alignment) -> str:
    """Hasse diagram of a partial-order alignment; a chain for sequential ones."""
    lines = ["digraph alignment {", "  rankdir=LR;"]
    if isinstance(alignment, SequentialAlignment):
        lines.extend(_event_node(f"m{i}", kind) for i, kind in enumerate(alignment.kinds))
        lines.extend(f"  m{i} -> m{i + 1};" for i in range(len(alignment) - 1))
    else:
        for mid in sorted(alignment.moves):
            lines.append(_event_node(f"m{mid}", alignment.moves[mid]))
        lines.extend(f"  m{a} -> m{b};" for a, b in sorted(alignment.covering))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(target: BranchingProcess | Alignment, path: str | Path | None = None, *,
              final_event: Optional[UnfEvent] = None) -> str:
    if isinstance(target, (POAlignment, SequentialAlignment)):
        text = alignment_dot(target)
    else:
        text = branching_process_dot(target, final_event)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text
