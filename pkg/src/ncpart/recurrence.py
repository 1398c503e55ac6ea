"""Recurrence system for the occurrence distribution of staircase-tail
patterns, refined by the smallest repeated letter.

For the pattern 1 2 ... (m-1) m^a (a >= 2 equal letters after an
increasing prefix), the distribution over size-n non-crossing partitions
satisfies a two-parameter recurrence whose states are:

* ``total(n, shift)`` — the sum of q^(occurrences) over all size-n
  partitions, where occurrences are counted in the word obtained by
  prepending a strictly increasing run of ``shift`` letters lying below
  every letter of the partition (``shift = 0`` is the plain
  distribution);
* ``cell(n, r, shift)`` — the same sum restricted to partitions whose
  smallest repeated letter equals ``r``.

Partitions with no repeated letter, or whose smallest repeated letter
exceeds n - a + 1, can contain no occurrence and contribute the constant
C_(a-1) to every total.

Two expansions of ``cell`` are implemented — ``cell`` folds the
smallest split of the recursion into the sum, ``cell_split`` keeps that
boundary term explicit — and they must agree term by term.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import MultiPoly, TruncatedSeries
from .core import StaircaseTail, catalan
from .errors import IndexOutOfRange
from .stats import rep_joint_rows

__all__ = [
    "StaircaseRecurrence",
    "recurrence_table",
    "staircase_series_by_recurrence",
]


class StaircaseRecurrence:
    """Memoized evaluator of the refined recurrence for the pattern
    1 2 ... (m-1) m^a.

    ``clamp`` controls whether the prefix-progress parameter is capped at
    m in memo keys.  Only the last m - 1 prepended letters can ever take
    part in an occurrence (the equal tail must come from the partition
    itself), so all states with shift >= m - 1 coincide; capping at m is
    therefore sound, and the uncapped mode exists to let tests verify
    that claim rather than assume it.
    """

    __slots__ = ("m", "a", "clamp", "_totals", "_cells")

    def __init__(self, m: int, a: int, *, clamp: bool = True) -> None:
        StaircaseTail(m, a)  # validates m >= 2, a >= 2
        self.m = m
        self.a = a
        self.clamp = clamp
        self._totals: dict[tuple[int, int], MultiPoly] = {}
        self._cells: dict[tuple[int, int, int], MultiPoly] = {}

    # -- state validation ----------------------------------------------------

    def _norm_shift(self, shift: int) -> int:
        if shift < 0:
            raise IndexOutOfRange(f"shift must be >= 0, got {shift}")
        return min(shift, self.m) if self.clamp else shift

    def _check_cell_index(self, n: int, r: int) -> None:
        if n < self.a:
            raise IndexOutOfRange(
                f"refined cells exist only for n >= {self.a}, got n = {n}"
            )
        if not 1 <= r <= n - self.a + 1:
            raise IndexOutOfRange(
                f"smallest repeated letter must lie in 1..{n - self.a + 1} "
                f"for n = {n}, got {r}"
            )

    # -- the recurrence --------------------------------------------------------

    def total(self, n: int, shift: int = 0) -> MultiPoly:
        """Sum of q^(occurrences) over all size-n partitions, with a
        strictly increasing run of ``shift`` lower letters prepended."""
        if n < 0:
            raise IndexOutOfRange(f"n must be >= 0, got {n}")
        shift = self._norm_shift(shift)
        if n < self.a:
            return MultiPoly.const(catalan(n))
        key = (n, shift)
        cached = self._totals.get(key)
        if cached is None:
            cached = MultiPoly.const(catalan(self.a - 1))
            for r in range(1, n - self.a + 2):
                cached = cached + self.cell(n, r, shift)
            self._totals[key] = cached
        return cached

    def cell(self, n: int, r: int, shift: int = 0) -> MultiPoly:
        """Sum of q^(occurrences) over size-n partitions whose smallest
        repeated letter is r, with ``shift`` lower letters prepended."""
        self._check_cell_index(n, r)
        shift = self._norm_shift(shift)
        key = (n, r, shift)
        cached = self._cells.get(key)
        if cached is None:
            acc = MultiPoly.zero()
            for j in range(r + 1, n + 1):
                acc = acc + self.total(j - r - 1, shift + r) * self.total(
                    n - j + 1, 0
                )
            if r + shift >= self.m:
                weight = MultiPoly.marker("q") - MultiPoly.one()
                acc = acc + weight * self.total(n - r - self.a + 2, 0)
            self._cells[key] = acc
            cached = acc
        return cached

    def cell_split(self, n: int, r: int, shift: int = 0) -> MultiPoly:
        """Alternative expansion of :meth:`cell` with the smallest split
        of the recursion kept as an explicit boundary term."""
        self._check_cell_index(n, r)
        shift = self._norm_shift(shift)
        acc = self.total(n - r, 0)
        for j in range(r + 2, n + 1):
            acc = acc + self.total(j - r - 1, shift + r) * self.total(
                n - j + 1, 0
            )
        if r + shift >= self.m:
            weight = MultiPoly.marker("q") - MultiPoly.one()
            acc = acc + weight * self.total(n - r - self.a + 2, 0)
        return acc

    # -- derived objects -------------------------------------------------------

    def series(self, order: int) -> TruncatedSeries:
        """The distribution series sum_n total(n) x^n mod x^order."""
        if order < 1:
            raise ValueError("order must be >= 1")
        return TruncatedSeries([self.total(n) for n in range(order)])

    def refined_check(self, n: int) -> dict:
        """Compare every refined cell at size n against brute force.

        Returns a report with one entry per smallest-repeated-letter value
        plus one for the boundary count (partitions that cannot contain an
        occurrence must number C_(a-1) and carry no occurrences).
        Raises nothing; the caller inspects ``status``.
        """
        if n < self.a:
            raise IndexOutOfRange(
                f"refined cells exist only for n >= {self.a}, got n = {n}"
            )
        word = tuple(range(1, self.m)) + (self.m,) * self.a
        brute_row = rep_joint_rows(n, word)[n]
        by_rep: dict[int, MultiPoly] = {}
        for (eq, ep, ev), coeff in brute_row.items():
            assert ep == 0
            by_rep[ev] = by_rep.get(ev, MultiPoly.zero()) + MultiPoly(
                {(eq, 0, 0): coeff}
            )
        entries = []
        for r in range(1, n - self.a + 2):
            expected = by_rep.get(r, MultiPoly.zero())
            actual = self.cell(n, r)
            entries.append(
                {
                    "rep": r,
                    "status": "pass" if expected == actual else "fail",
                    "expected": expected.to_json_obj(),
                    "actual": actual.to_json_obj(),
                }
            )
        boundary = MultiPoly.zero()
        for r, poly in by_rep.items():
            if r == 0 or r > n - self.a + 1:
                boundary = boundary + poly
        boundary_ok = boundary == MultiPoly.const(catalan(self.a - 1))
        entries.append(
            {
                "rep": None,
                "status": "pass" if boundary_ok else "fail",
                "expected": MultiPoly.const(catalan(self.a - 1)).to_json_obj(),
                "actual": boundary.to_json_obj(),
            }
        )
        status = "pass" if all(e["status"] == "pass" for e in entries) else "fail"
        return {"m": self.m, "a": self.a, "n": n, "status": status, "cells": entries}


_TABLES: dict[tuple[int, int, bool], StaircaseRecurrence] = {}


def recurrence_table(m: int, a: int, *, clamp: bool = True) -> StaircaseRecurrence:
    """Shared memoized recurrence table for the pattern 1 2 ... (m-1) m^a."""
    key = (m, a, clamp)
    table = _TABLES.get(key)
    if table is None:
        table = StaircaseRecurrence(m, a, clamp=clamp)
        _TABLES[key] = table
    return table


def staircase_series_by_recurrence(
    m: int, a: int, order: int, *, clamp: bool = True
) -> TruncatedSeries:
    """Distribution series of the pattern 1 2 ... (m-1) m^a computed from
    the recurrence (independent of the closed form)."""
    return recurrence_table(m, a, clamp=clamp).series(order)
