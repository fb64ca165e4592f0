#!/usr/bin/env python
# -*- coding:utf-8 -*-
"""
Marking-equation lower bound on the remaining alignment cost.

``h(m)`` is the optimum of the LP relaxation

    minimise  sum(cost[t] * x[t])
    s.t.      m + C x = f,  x >= 0

over the non-dummy transitions of a synchronous product. The LP is solved by
a two-phase simplex on integer rows with Bland's rule, so the bound is an
exact rational and never needs a tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Optional, Sequence
from enum import Enum
import threading
import math

import numpy as np

from folda.core.errors import InvariantViolation
from folda.core.log import get_logger
from folda.domain.nets import Marking
from folda.domain.product import SINK_PLACE, SOURCE_PLACE, SyncProduct

logger = get_logger(__name__)


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    objective: Optional[Fraction] = None
    firing_vector: dict[str, Fraction] = field(default_factory=dict)
    pivots: int = 0


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    matrix: np.ndarray

    @classmethod
    def of(cls, sp: SyncProduct) -> "IncidenceMatrix":
        places = tuple(sorted(sp.net.places - {SOURCE_PLACE, SINK_PLACE}))
        transitions = sp.inner_transitions
        row = {p: i for i, p in enumerate(places)}
        matrix = np.zeros((len(places), len(transitions)), dtype=np.int64)
        for j, t in enumerate(transitions):
            for p, n in sp.net.preset[t].items:
                matrix[row[p], j] -= n
            for p, n in sp.net.postset[t].items:
                matrix[row[p], j] += n
        matrix.setflags(write=False)
        return cls(places, transitions, matrix)

    def vector(self, marking: Marking) -> np.ndarray:
        counts = dict(marking.items)
        return np.array([counts.get(p, 0) for p in self.places], dtype=np.int64)

    def apply(self, marking: Marking, firing: dict[str, Fraction]) -> list[Fraction]:
        """``m + C x`` as exact rationals, row by row."""
        base = self.vector(marking).tolist()
        out = [Fraction(v) for v in base]
        for j, t in enumerate(self.transitions):
            x = firing.get(t, Fraction(0))
            if x:
                for i, c in enumerate(self.matrix[:, j].tolist()):
                    if c:
                        out[i] += c * x
        return out


def _normalize(row: list[int]) -> list[int]:
    g = reduce(math.gcd, row, 0)
    if g > 1:
        return [v // g for v in row]
    return row


class _IntegerSimplex:
    """Tableau whose row ``i`` stands for ``row / row[basis[i]]``.

    Every stored row is an integer vector with the coefficient of its basic
    variable kept positive; pivots are fraction-free and rows are reduced by
    their gcd after each update.
    """

    def __init__(self, rows: list[list[int]], rhs: list[int], n: int):
        self.n = n
        m = len(rows)
        self.rows = [list(r) + [1 if k == i else 0 for k in range(m)] + [b]
                     for i, (r, b) in enumerate(zip(rows, rhs))]
        self.basis = [n + i for i in range(m)]
        self.width = n + m
        self.pivots = 0

    def _pivot(self, r: int, c: int, objective: list[int]) -> list[int]:
        pivot_row = self.rows[r]
        p = pivot_row[c]
        if p < 0:
            pivot_row = [-v for v in pivot_row]
            p = -p
        pivot_row = _normalize(pivot_row)
        p = pivot_row[c]
        self.rows[r] = pivot_row
        for i, row in enumerate(self.rows):
            if i == r or row[c] == 0:
                continue
            f = row[c]
            self.rows[i] = _normalize([p * a - f * b for a, b in zip(row, pivot_row)])
        if objective[c]:
            f = objective[c]
            objective = _normalize([p * a - f * b for a, b in zip(objective, pivot_row)])
        self.basis[r] = c
        self.pivots += 1
        return objective

    def _run(self, objective: list[int], columns: int) -> list[int]:
        while True:
            entering = next((j for j in range(columns) if objective[j] < 0), None)
            if entering is None:
                return objective
            leave = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a <= 0:
                    continue
                if leave is None:
                    leave = i
                    continue
                best = self.rows[leave]
                # rhs_i / a_i against rhs_best / a_best
                lhs = row[-1] * best[entering]
                rhs = best[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[leave]):
                    leave = i
            if leave is None:
                raise InvariantViolation("marking-equation LP is unbounded")
            objective = self._pivot(leave, entering, objective)

    def value(self, i: int) -> Fraction:
        row = self.rows[i]
        return Fraction(row[-1], row[self.basis[i]])

    def phase_one(self) -> bool:
        # reduced costs of "minimise the sum of artificials" for the initial basis
        objective = [0] * (self.width + 1)
        for row in self.rows:
            for j in range(self.n):
                objective[j] -= row[j]
            objective[-1] -= row[-1]
        self._run(objective, self.n)
        if any(b >= self.n and self.value(i) > 0 for i, b in enumerate(self.basis)):
            return False
        self._drive_out_artificials()
        return True

    def _drive_out_artificials(self) -> None:
        i = 0
        while i < len(self.rows):
            if self.basis[i] < self.n:
                i += 1
                continue
            row = self.rows[i]
            column = next((j for j in range(self.n) if row[j] != 0), None)
            if column is None:
                # redundant equality
                del self.rows[i]
                del self.basis[i]
                continue
            self._pivot(i, column, [0] * (self.width + 1))
            i += 1
        self.rows = [row[:self.n] + [row[-1]] for row in self.rows]
        self.width = self.n

    def phase_two(self, costs: Sequence[int]) -> None:
        reduced = [Fraction(c) for c in costs] + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if not cb:
                continue
            d = self.rows[i][b]
            for j, a in enumerate(self.rows[i]):
                if a:
                    reduced[j] -= Fraction(cb * a, d)
        scale = reduce(math.lcm, (f.denominator for f in reduced), 1)
        objective = [int(f * scale) for f in reduced]
        self._run(objective, self.n)


def solve_marking_equation(
        incidence: IncidenceMatrix,
        costs: Sequence[Fraction],
        start: Marking,
        target: Marking,
) -> LPSolution:
    """Exact minimum-cost rational solution of ``start + C x = target``."""
    rows: list[list[int]] = []
    rhs: list[int] = []
    b = incidence.vector(target) - incidence.vector(start)
    for i, coefficients in enumerate(incidence.matrix.tolist()):
        value = int(b[i])
        if not any(coefficients):
            if value != 0:
                return LPSolution(LPStatus.INFEASIBLE)
            continue
        if value < 0:
            coefficients = [-c for c in coefficients]
            value = -value
        rows.append(coefficients)
        rhs.append(value)

    n = len(incidence.transitions)
    simplex = _IntegerSimplex(rows, rhs, n)
    if not simplex.phase_one():
        return LPSolution(LPStatus.INFEASIBLE, pivots=simplex.pivots)

    scale = reduce(math.lcm, (c.denominator for c in costs), 1)
    simplex.phase_two([int(c * scale) for c in costs])

    firing: dict[str, Fraction] = {}
    for i, column in enumerate(simplex.basis):
        x = simplex.value(i)
        if x:
            firing[incidence.transitions[column]] = x
    objective = sum(
        (costs[j] * firing.get(t, Fraction(0)) for j, t in enumerate(incidence.transitions)),
        Fraction(0),
    )
    return LPSolution(LPStatus.OPTIMAL, objective, firing, simplex.pivots)


def inner_marking(sp: SyncProduct, marking: Marking) -> Marking:
    """Map a product marking onto the inner places the LP is stated over.

    The source token stands for the inner initial marking; a sink token means
    the dummy end has fired, so its inner final marking is put back.
    """
    if marking[SOURCE_PLACE]:
        return marking - Marking.of([SOURCE_PLACE]) + sp.inner_initial
    if marking[SINK_PLACE]:
        return marking - Marking.of([SINK_PLACE]) + sp.inner_final
    return marking


def marking_equation_lower_bound(sp: SyncProduct, marking: Marking) -> LPSolution:
    incidence = IncidenceMatrix.of(sp)
    costs = [sp.costs[t] for t in incidence.transitions]
    return solve_marking_equation(incidence, costs, inner_marking(sp, marking), sp.inner_final)


class MarkingEquationHeuristic:
    """Memoised ``h`` for one synchronous product.

    Safe to share between threads: lookups and inserts hold a lock, the LP
    itself runs outside it, so two threads may solve the same marking once
    each and store equal values.
    """

    def __init__(self, sp: SyncProduct):
        self.sp = sp
        self._cache: dict[Marking, Optional[Fraction]] = {}
        self._lock = threading.Lock()
        self.solves = 0
        self.hits = 0
        self.pivots = 0

    @cached_property
    def incidence(self) -> IncidenceMatrix:
        return IncidenceMatrix.of(self.sp)

    @cached_property
    def _costs(self) -> list[Fraction]:
        return [self.sp.costs[t] for t in self.incidence.transitions]

    def solve(self, marking: Marking) -> LPSolution:
        return solve_marking_equation(
            self.incidence, self._costs, inner_marking(self.sp, marking), self.sp.inner_final
        )

    def __call__(self, marking: Marking) -> Optional[Fraction]:
        """``h(marking)``, or ``None`` when the final marking is unreachable even in the LP."""
        with self._lock:
            if marking in self._cache:
                self.hits += 1
                return self._cache[marking]
        solution = self.solve(marking)
        value = solution.objective if solution.status is LPStatus.OPTIMAL else None
        with self._lock:
            self.solves += 1
            self.pivots += solution.pivots
            self._cache.setdefault(marking, value)
        return value

    def __len__(self) -> int:
        return len(self._cache)


def cached_h(cache: MarkingEquationHeuristic, sp: SyncProduct, marking: Marking) -> Optional[Fraction]:
    if cache.sp is not sp:
        raise InvariantViolation("heuristic cache belongs to another synchronous product")
    return cache(marking)
