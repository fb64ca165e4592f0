#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from typing import Optional, List, Tuple
from fractions import Fraction
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Variant(str, Enum):
    FOLDA_N = "foldn"
    FOLDA_H = "foldh"
    DIJKSTRA = "dijkstra"
    ASTAR = "astar"

    @property
    def is_unfolding(self) -> bool:
        return self in (Variant.FOLDA_N, Variant.FOLDA_H)

    @property
    def uses_heuristic(self) -> bool:
        return self in (Variant.FOLDA_H, Variant.ASTAR)


class DeviationPlacement(str, Enum):
    NONE = "none"
    START = "start"
    MIDDLE = "middle"
    END = "end"


class Construct(str, Enum):
    C = "C"
    E = "E"
    CN = "CN"
    EN = "EN"
    L = "L"

    @property
    def nested(self) -> bool:
        return self in (Construct.CN, Construct.EN)


# (breadth, depth, nesting factor, nesting breadth, nesting depth) as (min, max)
TAXONOMY: dict[Construct, Tuple[Tuple[int, int], ...]] = {
    Construct.C: ((2, 12), (1, 15)),
    Construct.E: ((2, 15), (1, 15)),
    Construct.CN: ((2, 2), (1, 5), (1, 5), (2, 2), (1, 5)),
    Construct.EN: ((2, 2), (1, 5), (1, 5), (2, 2), (1, 5)),
    Construct.L: ((1, 1), (1, 5)),
}


class ModelSpec(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    # "construct" is taken by BaseModel.construct
    construct_kind: Construct = Field(..., alias="construct", description="Control-flow construct")
    breadth: int = Field(..., description="Number of branches")
    depth: int = Field(..., description="Transitions per branch")
    nesting_factor: Optional[int] = Field(None, description="Nesting levels (CN/EN)")
    nesting_breadth: Optional[int] = Field(None, description="Branches of a nested block")
    nesting_depth: Optional[int] = Field(None, description="Branch length of a nested block")
    seed: int = Field(0, description="Seed for trace simulation")

    @model_validator(mode="after")
    def _check_ranges(self) -> "ModelSpec":
        ranges = TAXONOMY[self.construct_kind]
        names = ("breadth", "depth", "nesting_factor", "nesting_breadth", "nesting_depth")
        for name, (lo, hi) in zip(names, ranges):
            value = getattr(self, name)
            if value is None:
                raise ValueError(f"{name} is required for {self.construct_kind.value} models")
            if not lo <= value <= hi:
                raise ValueError(
                    f"{name}={value} outside {lo}-{hi} for {self.construct_kind.value} models"
                )
        if not self.construct_kind.nested:
            for name in names[2:]:
                if getattr(self, name) is not None:
                    raise ValueError(f"{name} only applies to nested models")
        return self


class RunMetrics(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, protected_namespaces=())

    variant: Variant
    model_id: str = ""
    trace_id: str = ""
    placement: DeviationPlacement = DeviationPlacement.NONE
    elapsed_time: float = 0.0
    queued_states: int = 0
    visited_states: int = 0
    cost: Optional[Fraction] = None
    trace_length: int = 0
    spt: int = 0
    timed_out: bool = False
    error: Optional[str] = None

    @model_validator(mode="after")
    def _visited_le_queued(self) -> "RunMetrics":
        if self.visited_states > self.queued_states:
            raise ValueError("visited_states cannot exceed queued_states")
        return self


class TraceEventDoc(BaseModel):
    id: str
    activity: str = Field(..., min_length=1)


class TraceDoc(BaseModel):
    events: List[TraceEventDoc] = Field(default_factory=list)
    order: List[Tuple[str, str]] = Field(default_factory=list)


class TraceFileDoc(BaseModel):
    traces: List[TraceDoc] = Field(default_factory=list)


class ManifestEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: ModelSpec
    traces: Optional[int] = Field(None, ge=1, description="Overrides the configured trace count")
