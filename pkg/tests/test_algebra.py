"""Exact polynomial and truncated-series arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncpart.algebra import (
    DEFAULT_ORDER,
    MARKERS,
    MultiPoly,
    TruncatedSeries,
    catalan_series,
    series_div,
    series_sqrt,
    solve_poly_functional,
    solve_quadratic,
)
from ncpart.core import catalan
from ncpart.errors import (
    ConstantTermNotOne,
    NonInvertibleConstantTerm,
)

Q = MultiPoly.marker("q")
P = MultiPoly.marker("p")
V = MultiPoly.marker("v")


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------


def test_marker_order_is_fixed():
    assert MARKERS == ("q", "p", "v")


def test_constructors_and_equality():
    assert MultiPoly.zero().is_zero()
    assert MultiPoly.const(0) == MultiPoly.zero()
    assert MultiPoly.one() == MultiPoly.const(1)
    assert MultiPoly.coerce(3) == MultiPoly.const(3)
    assert MultiPoly.coerce(Fraction(1, 2)) * 2 == MultiPoly.one()


def test_arithmetic_identities():
    assert (Q + 1) * (Q - 1) == Q * Q - 1
    assert (Q + P) * (Q + P) == Q**2 + Q * P * 2 + P**2
    assert (Q - Q).is_zero()
    assert Q * MultiPoly.zero() == MultiPoly.zero()
    assert -Q + Q == MultiPoly.zero()


def test_rational_coefficients_stay_exact():
    half = MultiPoly.const(Fraction(1, 2))
    third = MultiPoly.const(Fraction(1, 3))
    assert half + third == MultiPoly.const(Fraction(5, 6))
    assert half * third == MultiPoly.const(Fraction(1, 6))
    assert (half * Q + third * Q).scale(6) == Q.scale(5)


def test_substitute():
    poly = Q**2 * P + V
    assert poly.substitute(q=2) == P.scale(4) + V
    assert poly.substitute(q=1, p=1, v=0) == MultiPoly.one()
    assert poly.substitute(p=Q) == Q**3 + V
    with pytest.raises(ValueError):
        poly.substitute(w=1)


def test_derivative():
    poly = Q**3 + Q.scale(2) + MultiPoly.const(7)
    assert poly.derivative("q") == Q**2 * 3 + 2
    assert poly.derivative("p").is_zero()


def test_str_canonical_forms():
    assert str(MultiPoly.zero()) == "0"
    assert str(MultiPoly.const(4) + Q) == "4 + q"
    assert str(Q**2 * 3 + Q.scale(16) + 9) == "9 + 16*q + 3*q^2"
    assert str(P**2 + P**2 * Q) == "p^2 + q*p^2"


def test_json_round_trip():
    poly = Q**2 * P.scale(Fraction(-3, 7)) + V + 5
    data = poly.to_json_obj()
    assert MultiPoly.from_json_obj(data) == poly
    assert MultiPoly.from_json_obj([]) == MultiPoly.zero()
    simple = MultiPoly.const(4) + Q
    assert simple.to_json_obj() == [
        {"exponents": {}, "coeff": "4"},
        {"exponents": {"q": 1}, "coeff": "1"},
    ]


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.tuples(
                st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)
            ),
            st.fractions(min_value=-9, max_value=9, max_denominator=9),
        ),
        max_size=6,
    )
)
def test_json_round_trip_random(terms):
    poly = MultiPoly.zero()
    for exps, coeff in terms:
        poly = poly + MultiPoly({exps: coeff})
    assert MultiPoly.from_json_obj(poly.to_json_obj()) == poly


# ---------------------------------------------------------------------------
# TruncatedSeries
# ---------------------------------------------------------------------------


def test_series_basics():
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, 6)
    one = TruncatedSeries.one(6)
    geom = series_div(one, one - x)
    assert [c for c in geom.coeffs] == [MultiPoly.one()] * 6
    assert (geom - geom).is_zero()
    assert geom.coefficient(3) == MultiPoly.one()
    assert geom.truncate(3).order == 3


def test_series_multiplication_truncates():
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, 4)
    sq = x * x
    assert sq.order == 4
    assert sq.coefficient(2) == MultiPoly.one()
    assert sq.coefficient(3).is_zero()


def test_series_div_requires_invertible_or_monomial():
    one = TruncatedSeries.one(5)
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, 5)
    with pytest.raises(NonInvertibleConstantTerm):
        series_div(one, x)
    # marker-monomial constant term divides exactly
    q_series = TruncatedSeries.constant(Q, 5)
    num = q_series + q_series * x
    quotient = series_div(num, q_series)
    assert quotient == one + x
    # ... but an inexact step raises
    with pytest.raises(NonInvertibleConstantTerm):
        series_div(one, q_series)


def test_series_sqrt_inverts_squaring():
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, 10)
    s = TruncatedSeries.one(10) + x.scale(3) + (x * x).scale(Fraction(1, 5))
    root = series_sqrt(s * s)
    assert root == s
    with pytest.raises(ConstantTermNotOne):
        series_sqrt(x)


def test_catalan_series_matches_catalan_numbers():
    series = catalan_series(13)
    for n in range(13):
        assert series.coefficient(n) == MultiPoly.const(catalan(n))


def test_solve_quadratic_recovers_catalan():
    # F = 1 + x F^2, i.e. x*F^2 - F + 1 = 0.
    order = 12
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, order)
    one = TruncatedSeries.one(order)
    fixed = solve_quadratic(x, one, one)
    assert fixed == catalan_series(order)


def test_solve_poly_functional_recovers_catalan():
    # x*Y^2 - Y + 1 = 0 with Y(0) = 1, as a degree-2 functional equation.
    order = 12
    x = TruncatedSeries.from_x_poly({1: MultiPoly.one()}, order)
    one = TruncatedSeries.one(order)
    solution = solve_poly_functional([one, -one, x], 1)
    assert solution == catalan_series(order)


def test_series_json_round_trip():
    series = catalan_series(6) * TruncatedSeries.constant(Q, 6)
    data = series.to_json_obj()
    assert data["order"] == 6
    assert TruncatedSeries.from_json_obj(data) == series


def test_series_str():
    assert str(catalan_series(4)) == "(1) + (1)*x^1 + (2)*x^2 + (5)*x^3 + O(x^4)"


def test_default_order_cap():
    assert DEFAULT_ORDER == 24
