"""Closed-form generating functions for the covered pattern families,
closed-form occurrence totals, and the re-derivable equation table with its
deliberate-mutation hook.

Every generating function returns a :class:`TruncatedSeries` whose
coefficients are exact polynomials in the markers.  After each evaluation
the series is checked to be combinatorial: integer, nonnegative
coefficients (rationals may appear only when a rational specialization
value was supplied by the caller).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from .algebra import (
    DEFAULT_ORDER,
    MultiPoly,
    TruncatedSeries,
    catalan_series,
    series_div,
    series_inv,
    series_sqrt,
    solve_poly_functional,
    solve_quadratic,
)
from .core import (
    Generic,
    PatternFamily,
    RhoTail,
    Run,
    RunAscent,
    RunStaircase,
    Sandwich,
    StaircaseTail,
    SubwordPattern,
    as_pattern,
    catalan,
    classify_pattern,
)
from .errors import (
    NonInvertibleConstantTerm,
    UnsupportedFamily,
    VSpecializationSingular,
)
from .stats import batch_distribution_rows

__all__ = [
    "FormulaId",
    "gf_joint_1a_1b2",
    "joint_quadratic",
    "gf_1m",
    "gf_1m2",
    "gf_rho_1b",
    "gf_1a_rho_1b",
    "gf_staircase_tail",
    "gf_staircase_joint_rep",
    "total_occurrences",
    "verify_table1",
    "table1_mutation_slots",
    "TABLE1_PATTERNS",
]

Rational = Union[int, Fraction]

_HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class FormulaId:
    """Identifier of one verification suite cell group (tag plus parameters)."""

    tag: str
    params: tuple = ()


def _q() -> MultiPoly:
    return MultiPoly.marker("q")


def _check_combinatorial(series: TruncatedSeries, *, integral: bool = True) -> TruncatedSeries:
    """Assert the series looks like a counting series before returning it."""
    for k, coeff in enumerate(series.coeffs):
        if not coeff.has_nonnegative_coeffs():
            raise AssertionError(
                f"coefficient of x^{k} has a negative term: {coeff}"
            )
        if integral and not coeff.has_integer_coeffs():
            raise AssertionError(
                f"coefficient of x^{k} has a non-integer term: {coeff}"
            )
    return series


def _xseries(
    pairs: Sequence[tuple[int, object]], order: int
) -> TruncatedSeries:
    """Series from (x-exponent, coefficient) pairs, summing repeats.

    Several formulas place terms at parameter-dependent exponents that can
    coincide at small parameters; a dict literal would silently drop one,
    so collisions are accumulated here.
    """
    terms: dict[int, MultiPoly] = {}
    for k, value in pairs:
        terms[k] = terms.get(k, MultiPoly.zero()) + MultiPoly.coerce(value)
    return TruncatedSeries.from_x_poly(terms, order)


# ---------------------------------------------------------------------------
# Joint distribution of a run and a run-ascent pattern
# ---------------------------------------------------------------------------


def joint_quadratic(
    a: int, b: int, order: int
) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """The quadratic A*F^2 - B*F + C = 0 satisfied by the joint series of
    the patterns 1^a (marker p) and 1^b 2 (marker q).

    The series from :func:`gf_joint_1a_1b2` makes A*F^2 - B*F + C vanish
    identically mod x^order; verification suites check that residual."""
    q = _q()
    p = MultiPoly.marker("p")
    one = MultiPoly.one()
    shared: dict[int, MultiPoly] = {}

    def add(terms: Mapping[int, MultiPoly]) -> None:
        for k, val in terms.items():
            shared[k] = shared.get(k, MultiPoly.zero()) + val

    if a >= b:
        # marked-run weight q(p-1) on x^a; ascent weight (q-1)(1-px) on x^b
        add({a: q * (p - one)})
        add({b: q - one, b + 1: -(q - one) * p})
    else:
        # run weight (p-1) on x^a; ascent weight (q-1)(1-x)p^(b-a+1) on x^b
        add({a: p - one})
        t = (q - one) * p ** (b - a + 1)
        add({b: t, b + 1: -t})

    a_terms: dict[int, MultiPoly] = {1: one, 2: -p}
    b_terms: dict[int, MultiPoly] = {0: one, 1: -p}
    for k, val in shared.items():
        a_terms[k] = a_terms.get(k, MultiPoly.zero()) + val
        b_terms[k] = b_terms.get(k, MultiPoly.zero()) + val

    A = TruncatedSeries.from_x_poly(a_terms, order)
    B = TruncatedSeries.from_x_poly(b_terms, order)
    C = _xseries([(0, one), (1, -p), (a, p - one)], order)
    return A, B, C


def gf_joint_1a_1b2(a: int, b: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Joint occurrence series of the run 1^a (marker p) and the
    run-ascent 1^b 2 (marker q) over all non-crossing partitions."""
    Run(a)
    RunAscent(b)
    A, B, C = joint_quadratic(a, b, order)
    return _check_combinatorial(solve_quadratic(A, B, C))


# ---------------------------------------------------------------------------
# Single-pattern radicals
# ---------------------------------------------------------------------------


def gf_1m(m: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Occurrence series (marker q) of the constant pattern 1^m."""
    Run(m)
    q = _q()
    one = MultiPoly.one()
    n = order + 1
    w = _xseries([(0, one), (1, -q), (m, q - one)], n)
    inner = _xseries(
        [
            (0, one),
            (1, -(q + MultiPoly.const(4))),
            (2, q.scale(4)),
            (m, (q - one).scale(-3)),
        ],
        n,
    )
    numerator = w - series_sqrt(w * inner)
    denominator = _xseries(
        [(0, MultiPoly.const(2)), (1, q.scale(-2)), (m - 1, (q - one).scale(2))],
        order,
    )
    return _check_combinatorial(series_div(numerator.shift_down(1), denominator))


def gf_1m2(m: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Occurrence series (marker q) of the run-ascent pattern 1^m 2."""
    RunAscent(m)
    q = _q()
    one = MultiPoly.one()
    n = order + 1
    w = _xseries([(0, one), (m, q - one)], n)
    mirror = _xseries([(0, one), (m, one - q)], n)
    inner = mirror * mirror - TruncatedSeries.from_x_poly({1: 4}, n)
    numerator = w - series_sqrt(inner)
    denominator = _xseries(
        [(0, MultiPoly.const(2)), (m - 1, (q - one).scale(2))], order
    )
    return _check_combinatorial(series_div(numerator.shift_down(1), denominator))


def gf_rho_1b(
    rho: Union[Sequence[int], str], b: int, order: int = DEFAULT_ORDER
) -> TruncatedSeries:
    """Occurrence series (marker q) of the pattern (rho+1) 1^b.

    The series depends on rho only through its length: all patterns with
    the same |rho| + b share it.
    """
    family = RhoTail(tuple(as_pattern(rho).word), b)
    a = len(family.rho)
    q = _q()
    one = MultiPoly.one()
    n = order + 1
    w = _xseries([(0, one), (a + b - 1, (q - one).scale(2))], n)
    inner = _xseries(
        [(0, one), (1, MultiPoly.const(-4)), (a + b, (q - one).scale(-4))], n
    )
    numerator = w - series_sqrt(inner)
    denominator = _xseries(
        [(0, MultiPoly.const(2)), (a + b - 2, (q - one).scale(2))], order
    )
    return _check_combinatorial(series_div(numerator.shift_down(1), denominator))


def gf_1a_rho_1b(
    a: int,
    rho: Union[Sequence[int], str],
    b: int,
    order: int = DEFAULT_ORDER,
) -> TruncatedSeries:
    """Occurrence series (marker q) of the pattern 1^a (rho+1) 1^b.

    Symmetric in a and b; depends on rho only through its length.
    """
    family = Sandwich(a, tuple(as_pattern(rho).word), b)
    m = len(family.rho)
    s = min(a, b)
    t = max(a, b)
    q = _q()
    one = MultiPoly.one()
    n = order + 1

    def lifted(span: int) -> dict[int, MultiPoly]:
        # (1-q)(1 - x^span) x^(m+t), dropped entirely when span == 0
        terms: dict[int, MultiPoly] = {0: one, 1: -one}
        if span:
            terms[m + t] = one - q
            terms[m + t + span] = q - one
        return terms

    P = TruncatedSeries.from_x_poly(lifted(s - 1), n)
    Q = TruncatedSeries.from_x_poly(lifted(s), n)
    radicand = Q - P.shift_up(1).scale(4)
    numerator = Q - series_sqrt(Q) * series_sqrt(radicand)
    return _check_combinatorial(
        series_div(numerator.shift_down(1), P.truncate(order).scale(2))
    )


# ---------------------------------------------------------------------------
# Staircase-tail patterns: kernel-method series and the rep refinement
# ---------------------------------------------------------------------------


def _staircase_kernel(m: int, a: int, order: int) -> list[TruncatedSeries]:
    """Coefficients (in y-degree order) of the kernel polynomial whose
    power-series root with y(0)=1 is the staircase-tail series."""
    weight = MultiPoly.marker("q") - MultiPoly.one()
    degree = max(2, m)
    terms: list[dict[int, MultiPoly]] = [dict() for _ in range(degree + 1)]
    terms[0][0] = MultiPoly.one()
    terms[1][0] = -MultiPoly.one()
    terms[2][1] = terms[2].get(1, MultiPoly.zero()) + MultiPoly.one()
    exp = a + m - 2
    terms[m][exp] = terms[m].get(exp, MultiPoly.zero()) + weight
    terms[m - 1][exp] = terms[m - 1].get(exp, MultiPoly.zero()) - weight
    return [TruncatedSeries.from_x_poly(t, order) for t in terms]


def gf_staircase_tail(m: int, a: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Occurrence series (marker q) of the pattern 1 2 ... (m-1) m^a,
    solved from its kernel equation by Newton iteration."""
    StaircaseTail(m, a)
    kernel = _staircase_kernel(m, a, order)
    return _check_combinatorial(solve_poly_functional(kernel, 1))


def gf_staircase_joint_rep(
    m: int,
    a: int,
    order: int = DEFAULT_ORDER,
    v_value: Rational = 1,
) -> TruncatedSeries:
    """Series of q^(occurrences of 1 2 ... (m-1) m^a) with the smallest
    repeated letter counted by the numeric weight ``v_value``.

    The only singular specialization of the underlying algebra is
    v_value = 1, which is routed through a collapse identity (the result
    is then the plain occurrence series).  Any other exact rational is
    evaluated directly.
    """
    StaircaseTail(m, a)
    v = v_value if isinstance(v_value, Fraction) else Fraction(v_value)
    q = _q()
    one = MultiPoly.one()
    y = gf_staircase_tail(m, a, order)
    x = TruncatedSeries.x(order)
    one_minus_x = TruncatedSeries.from_x_poly({0: 1, 1: -1}, order)
    xy = y.shift_up(1)
    one_minus_xy = TruncatedSeries.one(order) - xy
    cat = [catalan(j) for j in range(a)]

    def low_sum(u: TruncatedSeries) -> TruncatedSeries:
        # (sum_{j<a} C_j x^j) / (1 - u)
        poly = TruncatedSeries.from_x_poly(
            {j: cat[j] for j in range(a)}, order
        )
        return series_div(poly, TruncatedSeries.one(order) - u)

    def mid_sum(u: TruncatedSeries, v_rat: Fraction) -> TruncatedSeries:
        # x * sum_{j<=a-3} sum_{1<=i<=a-2-j} C_i C_j x^(i+j) / ((1-u)(1-v x))
        if a == 2:
            return TruncatedSeries.zero(order)
        terms: dict[int, Fraction] = {}
        for j in range(a - 2):
            for i in range(1, a - 1 - j):
                key = i + j + 1
                terms[key] = terms.get(key, Fraction(0)) + Fraction(
                    catalan(i) * catalan(j)
                )
        poly = TruncatedSeries.from_x_poly(terms, order)
        den = (TruncatedSeries.one(order) - u) * (
            TruncatedSeries.from_x_poly({0: 1, 1: -v_rat}, order)
        )
        return series_div(poly, den)

    try:
        inv_x_xy = series_inv(one_minus_x * one_minus_xy)
        diag = (
            (xy ** m) * one_minus_x - one_minus_xy.shift_up(m)
        ) * inv_x_xy * (q - one)
        diag = diag.shift_up(a - 2)
        axx = (
            diag
            - mid_sum(xy, Fraction(1))
            + inv_x_xy.shift_up(a).scale(cat[a - 1])
            + low_sum(xy)
        )

        if v == 1:
            avx = axx
        else:
            one_minus_vx = TruncatedSeries.from_x_poly({0: 1, 1: -v}, order)
            inv_pair = series_inv(one_minus_vx * one_minus_x)
            g1 = inv_pair.shift_up(a).scale(cat[a - 1])
            bracket_num = (
                one_minus_x.scale(v ** m) - one_minus_vx
            ) * (y - TruncatedSeries.one(order)) * inv_pair
            g2 = bracket_num.shift_up(a + m - 2) * (one - q)
            g2 = g2.scale(Fraction(1, 1) / (1 - v))
            g3 = ((y - TruncatedSeries.one(order)) * axx).scale(
                Fraction(1, 1) / (1 - v)
            )
            bracket = g1 + g2 + g3 - mid_sum(
                TruncatedSeries.from_x_poly({1: v}, order), Fraction(1)
            ) + low_sum(TruncatedSeries.from_x_poly({1: v}, order))
            avx = series_div(
                bracket, y - TruncatedSeries.constant(v, order)
            ).scale(1 - v)

        one_minus_vx = TruncatedSeries.from_x_poly({0: 1, 1: -v}, order)
        y_minus_one = y - TruncatedSeries.one(order)
        tail = series_inv(one_minus_vx).shift_up(a + m - 2) * y_minus_one
        tail = tail * (q - one).scale(v ** m)
        folded = (
            y_minus_one * (avx - y)
            - mid_sum(TruncatedSeries.zero(order), v).scale(v)
            + tail
        )
    except NonInvertibleConstantTerm as exc:  # pragma: no cover - defensive
        raise VSpecializationSingular(str(exc)) from exc

    corrections: dict[int, Fraction] = {}
    for n in range(2, min(a, order)):
        total = Fraction(0)
        for j in range(1, n + 1):
            total += (v ** j) * (catalan(n - j + 1) - catalan(n - j))
        if total:
            corrections[n] = total
    for n in range(a, order):
        total = Fraction(0)
        for k in range(n - a + 2, n + 1):
            total += (v ** k) * (catalan(n - k + 1) - catalan(n - k))
        if total:
            corrections[n] = corrections.get(n, Fraction(0)) + total

    result = folded + series_inv(one_minus_x) + TruncatedSeries.from_x_poly(
        corrections, order
    )
    integral = v.denominator == 1 and v >= 0
    if v >= 0:
        return _check_combinatorial(result, integral=integral)
    return result


# ---------------------------------------------------------------------------
# Closed-form occurrence totals
# ---------------------------------------------------------------------------

FamilyLike = Union[PatternFamily, SubwordPattern, Sequence[int], str]


def _coerce_family(value: FamilyLike) -> PatternFamily:
    if isinstance(
        value, (Run, RunAscent, StaircaseTail, RunStaircase, Sandwich, RhoTail, Generic)
    ):
        return value
    return classify_pattern(as_pattern(value))


def total_occurrences(family: FamilyLike, n: int) -> int:
    """Total number of occurrences of the pattern over all size-n
    non-crossing partitions, from the closed-form count.

    Below the formula's threshold the total is 0 (the pattern cannot fit).
    Generic patterns have no closed form: :class:`UnsupportedFamily` is
    raised; callers may fall back to the q-derivative of the brute-force
    distribution at q=1.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    fam = _coerce_family(family)
    if isinstance(fam, Run):
        if n < fam.a:
            return 0
        r = n - fam.a + 1
        return math.comb(2 * r, r + 1)
    if isinstance(fam, RunAscent):
        if n < fam.a:
            return 0
        r = n - fam.a + 1
        return math.comb(2 * r - 1, r + 1)
    if isinstance(fam, RhoTail):
        a = len(fam.rho)
        if n < a + fam.b - 1:
            return 0
        r = n - a - fam.b + 2
        return math.comb(2 * r - 2, r + 1)
    if isinstance(fam, Sandwich):
        m = len(fam.rho)
        if n < m + fam.a + fam.b - 1:
            return 0
        r = n - m - fam.a - fam.b + 1
        return math.comb(2 * r, r + 1)
    if isinstance(fam, (StaircaseTail, RunStaircase)):
        m, a = (fam.m, fam.a)
        if n < a + m - 1:
            return 0
        r = n - a - m + 2
        numerator = math.comb(2 * r + m, r) * r
        assert numerator % (2 * r + m) == 0, "staircase total is not integral"
        return numerator // (2 * r + m)
    raise UnsupportedFamily(
        f"no closed-form total for pattern {fam.pattern().text!r}; "
        "fall back to the q-derivative of the brute-force distribution at q=1"
    )


# ---------------------------------------------------------------------------
# The seven-row equation table and its verification
# ---------------------------------------------------------------------------


def _table1_rows() -> list[dict]:
    """Structured data for the seven length-3 pattern rows: each row's
    quadratic A*F^2 - B*F + C = 0 and the producer of its series."""
    q = _q()
    one = MultiPoly.one()
    qm1 = q - one

    def producer(key: str) -> Callable[[int], TruncatedSeries]:
        table: dict[str, Callable[[int], TruncatedSeries]] = {
            "111": lambda n: gf_1m(3, n),
            "112": lambda n: gf_1m2(2, n),
            "121": lambda n: gf_1a_rho_1b(1, (1,), 1, n),
            "122": lambda n: gf_staircase_tail(2, 2, n),
            "211": lambda n: gf_rho_1b((1,), 2, n),
            "212": lambda n: catalan_series(n),
            "221": lambda n: gf_rho_1b((1, 1), 1, n),
        }
        return table[key]

    rows = [
        {
            "pattern": "111",
            "A": {1: one, 2: -q, 3: qm1},
            "B": {0: one, 1: -q, 3: qm1},
            "C": {0: one, 1: -q, 3: qm1},
        },
        {
            "pattern": "112",
            "A": {1: one, 2: qm1},
            "B": {0: one, 2: qm1},
            "C": {0: one},
        },
        {
            "pattern": "121",
            "A": {1: one},
            "B": {0: one, 2: -qm1},
            "C": {0: one, 2: -qm1},
        },
        {
            "pattern": "122",
            "A": {1: one, 2: qm1},
            "B": {0: one, 2: qm1},
            "C": {0: one},
        },
        {
            "pattern": "211",
            "A": {1: one, 2: qm1},
            "B": {0: one, 2: qm1.scale(2)},
            "C": {0: one, 2: qm1},
        },
        {
            "pattern": "212",
            "A": {1: one},
            "B": {0: one},
            "C": {0: one},
        },
        {
            "pattern": "221",
            "A": {1: one, 2: qm1},
            "B": {0: one, 2: qm1.scale(2)},
            "C": {0: one, 2: qm1},
        },
    ]
    for row in rows:
        row["producer"] = producer(row["pattern"])
    return rows


TABLE1_PATTERNS: tuple[str, ...] = ("111", "112", "121", "122", "211", "212", "221")

MutationSlot = tuple[str, str, int, tuple[int, int, int]]


def table1_mutation_slots() -> list[MutationSlot]:
    """Every stored coefficient of the equation table, as an addressable
    slot (pattern, equation part, x power, marker exponents)."""
    slots: list[MutationSlot] = []
    for row in _table1_rows():
        for part in ("A", "B", "C"):
            for x_exp, poly in sorted(row[part].items()):
                for exps, _coeff in poly.items():
                    slots.append((row["pattern"], part, x_exp, exps))
    return slots


def _apply_mutation(
    rows: list[dict], mutation: MutationSlot | None
) -> None:
    if mutation is None:
        return
    pattern, part, x_exp, exps = mutation
    for row in rows:
        if row["pattern"] == pattern:
            poly = row[part].get(x_exp, MultiPoly.zero())
            row[part] = dict(row[part])
            row[part][x_exp] = poly + MultiPoly({exps: 1})
            return
    raise ValueError(f"mutation targets unknown row {pattern!r}")


def verify_table1(order: int = 13, mutation: MutationSlot | None = None) -> dict:
    """Re-derive all seven rows of the equation table and compare with
    brute force.

    Each row yields one residual cell (the row's quadratic, re-expanded
    against the produced series, must vanish identically mod x^order) and
    one coefficient cell per size n <= min(order-1, 12) (the produced
    coefficient must equal the brute-force distribution).

    ``mutation`` adds +1 to one stored equation coefficient first; the
    deliberate-mutation self-test uses this to prove the verification
    would catch a wrong table.
    """
    if not 2 <= order <= 16:
        raise ValueError("order must be between 2 and 16")
    rows = _table1_rows()
    _apply_mutation(rows, mutation)
    n_max = min(order - 1, 12)
    brute = batch_distribution_rows(n_max, TABLE1_PATTERNS)
    cells = []
    for idx, row in enumerate(rows):
        series = row["producer"](order)
        A = TruncatedSeries.from_x_poly(row["A"], order)
        B = TruncatedSeries.from_x_poly(row["B"], order)
        C = TruncatedSeries.from_x_poly(row["C"], order)
        residual = A * series * series - B * series + C
        val = residual.valuation()
        cells.append(
            {
                "params": {"pattern": row["pattern"], "check": "equation"},
                "n": None,
                "status": "pass" if val is None else "fail",
                "expected": [],
                "actual": []
                if val is None
                else residual.coefficient(val).to_json_obj(),
            }
        )
        for n in range(n_max + 1):
            expected = brute[idx][n]
            actual = series.coefficient(n)
            cells.append(
                {
                    "params": {"pattern": row["pattern"], "check": "coefficient"},
                    "n": n,
                    "status": "pass" if expected == actual else "fail",
                    "expected": expected.to_json_obj(),
                    "actual": actual.to_json_obj(),
                }
            )
    status = "pass" if all(c["status"] == "pass" for c in cells) else "fail"
    report = {"target": "table1", "order": order, "status": status, "cells": cells}
    if mutation is not None:
        report["mutation"] = list(mutation[:3]) + [list(mutation[3])]
    return report
