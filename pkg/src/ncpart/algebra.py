"""Exact arithmetic for truncated power series in x whose coefficients are
polynomials in the markers q, p, v with rational coefficients.

Everything here is exact: coefficients are :class:`fractions.Fraction`, no
floating point is ever used, and every division checks its own exactness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    ConstantTermNotOne,
    NoConvergence,
    NonInvertibleConstantTerm,
    NoSeriesSolution,
    SingularDerivative,
)

__all__ = [
    "MARKERS",
    "DEFAULT_ORDER",
    "MultiPoly",
    "TruncatedSeries",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "series_add",
    "series_mul",
    "series_inv",
    "series_div",
    "series_sqrt",
    "solve_quadratic",
    "solve_poly_functional",
    "catalan_series",
]

#: The markers a polynomial coefficient may contain, in canonical order.
MARKERS: tuple[str, ...] = ("q", "p", "v")

#: Default truncation order used by the closed-form generators.
DEFAULT_ORDER = 24

Exponents = tuple[int, int, int]
Rational = Union[int, Fraction]
PolyLike = Union["MultiPoly", int, Fraction]

_ZERO_EXP: Exponents = (0, 0, 0)
_HALF = Fraction(1, 2)


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _coeff_str(value: Fraction) -> str:
    """Render a rational coefficient as a string: '5', '-3', or '3/2'."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class MultiPoly:
    """An exact polynomial in the markers q, p, v.

    Immutable.  Terms are stored as a dict mapping exponent triples
    ``(e_q, e_p, e_v)`` to nonzero :class:`Fraction` coefficients; zero
    coefficients are never stored, so equality of term dicts is equality
    of polynomials.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponents, Rational] | None = None) -> None:
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_fraction(coeff)
                if not c:
                    continue
                e = (int(exps[0]), int(exps[1]), int(exps[2]))
                if e[0] < 0 or e[1] < 0 or e[2] < 0:
                    raise ValueError(f"negative marker exponent in {exps!r}")
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return _POLY_ZERO

    @classmethod
    def one(cls) -> "MultiPoly":
        return _POLY_ONE

    @classmethod
    def const(cls, value: Rational) -> "MultiPoly":
        c = _as_fraction(value)
        if not c:
            return _POLY_ZERO
        return cls({_ZERO_EXP: c})

    @classmethod
    def marker(cls, name: str, exponent: int = 1, coeff: Rational = 1) -> "MultiPoly":
        if name not in MARKERS:
            raise ValueError(f"unknown marker {name!r}; markers are {MARKERS}")
        if exponent < 0:
            raise ValueError("marker exponent must be >= 0")
        exps = [0, 0, 0]
        exps[MARKERS.index(name)] = exponent
        return cls({tuple(exps): coeff})  # type: ignore[arg-type]

    @classmethod
    def coerce(cls, value: PolyLike) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return cls.const(value)

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponents, Fraction]]:
        """Iterate terms in canonical order (ascending exponent triples)."""
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        """The coefficient of the marker-free term."""
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def as_constant(self) -> Fraction | None:
        """This polynomial as a rational if it has no marker, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and _ZERO_EXP in self._terms:
            return self._terms[_ZERO_EXP]
        return None

    def single_term(self) -> tuple[Exponents, Fraction] | None:
        """The (exponents, coeff) pair if this polynomial is one monomial."""
        if len(self._terms) == 1:
            return next(iter(self._terms.items()))
        return None

    def has_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def has_nonnegative_coeffs(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: PolyLike) -> "MultiPoly":
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        o = MultiPoly.coerce(other)
        if not self._terms:
            return o
        if not o._terms:
            return self
        terms = dict(self._terms)
        for e, c in o._terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return _poly_from_clean(terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return _poly_from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: PolyLike) -> "MultiPoly":
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other: PolyLike) -> "MultiPoly":
        return MultiPoly.coerce(other) + (-self)

    def __mul__(self, other: PolyLike) -> "MultiPoly":
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        o = MultiPoly.coerce(other)
        if not self._terms or not o._terms:
            return _POLY_ZERO
        oc = o.as_constant()
        if oc is not None:
            return self.scale(oc)
        sc = self.as_constant()
        if sc is not None:
            return o.scale(sc)
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = terms.get(e)
                if s is None:
                    terms[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        terms[e] = s
                    else:
                        del terms[e]
        return _poly_from_clean(terms)

    __rmul__ = __mul__

    def scale(self, value: Rational) -> "MultiPoly":
        c = _as_fraction(value)
        if not c:
            return _POLY_ZERO
        return _poly_from_clean({e: k * c for e, k in self._terms.items()})

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = _POLY_ONE
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly":
        """Divide by a single-monomial divisor, requiring exactness.

        Every term of ``self`` must be divisible by the divisor monomial;
        otherwise :class:`NonInvertibleConstantTerm` is raised.
        """
        single = divisor.single_term()
        if single is None:
            raise NonInvertibleConstantTerm(
                f"divisor {divisor} is not a single monomial"
            )
        (de, dc) = single
        terms: dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            ne = (e[0] - de[0], e[1] - de[1], e[2] - de[2])
            if ne[0] < 0 or ne[1] < 0 or ne[2] < 0:
                raise NonInvertibleConstantTerm(
                    f"term with exponents {e} is not divisible by {divisor}"
                )
            terms[ne] = c / dc
        return _poly_from_clean(terms)

    # -- substitution and calculus ----------------------------------------

    def substitute(self, **values: Union[Rational, "MultiPoly"]) -> "MultiPoly":
        """Substitute values (rationals or polynomials) for markers.

        Markers not mentioned are left untouched.
        """
        for name in values:
            if name not in MARKERS:
                raise ValueError(f"unknown marker {name!r}")
        subs: dict[int, MultiPoly] = {
            MARKERS.index(name): MultiPoly.coerce(val) for name, val in values.items()
        }
        result = _POLY_ZERO
        for e, c in self._terms.items():
            term = MultiPoly.const(c)
            residual = [0, 0, 0]
            for idx in range(3):
                if idx in subs:
                    if e[idx]:
                        term = term * (subs[idx] ** e[idx])
                else:
                    residual[idx] = e[idx]
            if residual != [0, 0, 0]:
                term = term * MultiPoly({tuple(residual): 1})  # type: ignore[arg-type]
            result = result + term
        return result

    def derivative(self, name: str) -> "MultiPoly":
        if name not in MARKERS:
            raise ValueError(f"unknown marker {name!r}")
        idx = MARKERS.index(name)
        terms: dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            if e[idx] == 0:
                continue
            ne = list(e)
            ne[idx] -= 1
            key = tuple(ne)
            terms[key] = terms.get(key, Fraction(0)) + c * e[idx]  # type: ignore[index]
        return _poly_from_clean({e: c for e, c in terms.items() if c})

    # -- comparison / hashing / rendering ----------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for e, c in self.items():
            factors: list[str] = []
            for idx, name in enumerate(MARKERS):
                if e[idx] == 1:
                    factors.append(name)
                elif e[idx] > 1:
                    factors.append(f"{name}^{e[idx]}")
            if not factors:
                body = _coeff_str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_coeff_str(abs(c))] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        """Canonical JSON form: a list of terms in canonical order.

        Markers with exponent 0 are omitted from each term's exponent map.
        """
        out = []
        for e, c in self.items():
            exponents = {
                name: e[idx] for idx, name in enumerate(MARKERS) if e[idx]
            }
            out.append({"exponents": exponents, "coeff": _coeff_str(c)})
        return out

    @classmethod
    def from_json_obj(cls, data: Iterable[Mapping]) -> "MultiPoly":
        terms: dict[Exponents, Fraction] = {}
        for term in data:
            exponents = term.get("exponents", {})
            e = tuple(int(exponents.get(name, 0)) for name in MARKERS)
            terms[e] = terms.get(e, Fraction(0)) + Fraction(str(term["coeff"]))  # type: ignore[index]
        return cls(terms)


def _poly_from_clean(terms: dict[Exponents, Fraction]) -> MultiPoly:
    """Build a MultiPoly from an already-clean term dict (internal)."""
    poly = object.__new__(MultiPoly)
    object.__setattr__(poly, "_terms", terms)
    return poly


_POLY_ZERO = _poly_from_clean({})
_POLY_ONE = _poly_from_clean({_ZERO_EXP: Fraction(1)})


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """A power series in x known exactly modulo x^order.

    ``coeffs[k]`` is the :class:`MultiPoly` coefficient of x^k for
    0 <= k < order.  Binary operations between series of different orders
    truncate to the smaller order.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence[PolyLike]) -> None:
        if not coeffs:
            raise ValueError("a truncated series needs order >= 1")
        object.__setattr__(
            self, "_coeffs", tuple(MultiPoly.coerce(c) for c in coeffs)
        )

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([MultiPoly.zero()] * order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.from_x_poly({0: 1}, order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls.from_x_poly({1: 1}, order)

    @classmethod
    def constant(cls, value: PolyLike, order: int) -> "TruncatedSeries":
        return cls.from_x_poly({0: value}, order)

    @classmethod
    def from_x_poly(
        cls, terms: Mapping[int, PolyLike], order: int
    ) -> "TruncatedSeries":
        """Build a series from a map of x-exponent -> coefficient."""
        if order < 1:
            raise ValueError("order must be >= 1")
        coeffs = [MultiPoly.zero()] * order
        for k, value in terms.items():
            if k < 0:
                raise ValueError("negative x exponent")
            if k < order:
                coeffs[k] = coeffs[k] + MultiPoly.coerce(value)
        return cls(coeffs)

    # -- inspection --------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._coeffs)

    @property
    def coeffs(self) -> tuple[MultiPoly, ...]:
        return self._coeffs

    def coefficient(self, k: int) -> MultiPoly:
        if not 0 <= k < len(self._coeffs):
            raise IndexError(f"coefficient {k} outside truncation order {self.order}")
        return self._coeffs[k]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all are zero."""
        for k, c in enumerate(self._coeffs):
            if not c.is_zero():
                return k
        return None

    # -- reshaping ---------------------------------------------------------

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 1:
            raise ValueError("order must be >= 1")
        if order >= len(self._coeffs):
            return self
        return TruncatedSeries(self._coeffs[:order])

    def _padded(self, order: int) -> "TruncatedSeries":
        """Extend with zero coefficients (internal: claims no new accuracy)."""
        if order <= len(self._coeffs):
            return self.truncate(order)
        return TruncatedSeries(
            self._coeffs + (MultiPoly.zero(),) * (order - len(self._coeffs))
        )

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by x^k, keeping the truncation order."""
        if k < 0:
            raise ValueError("shift must be >= 0")
        if k == 0:
            return self
        coeffs = (MultiPoly.zero(),) * min(k, self.order)
        return TruncatedSeries((coeffs + self._coeffs)[: self.order])

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by x^k; the first k coefficients must vanish.

        The result's order drops by k (that is all the information held).
        """
        if k < 0:
            raise ValueError("shift must be >= 0")
        if k == 0:
            return self
        if k >= self.order:
            raise ValueError("cannot shift an entire series away")
        for j in range(k):
            if not self._coeffs[j].is_zero():
                raise NonInvertibleConstantTerm(
                    f"series has nonzero coefficient at x^{j}; cannot divide by x^{k}"
                )
        return TruncatedSeries(self._coeffs[k:])

    def map_coeffs(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self._coeffs])

    def substitute(self, **values: Union[Rational, MultiPoly]) -> "TruncatedSeries":
        """Substitute marker values in every coefficient."""
        return self.map_coeffs(lambda c: c.substitute(**values))

    def derivative_marker(self, name: str) -> "TruncatedSeries":
        """Differentiate every coefficient with respect to a marker."""
        return self.map_coeffs(lambda c: c.derivative(name))

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: Union["TruncatedSeries", PolyLike]) -> tuple[
        tuple[MultiPoly, ...], tuple[MultiPoly, ...]
    ]:
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return self._coeffs[:n], other._coeffs[:n]
        const = MultiPoly.coerce(other)
        coeffs = [MultiPoly.zero()] * self.order
        coeffs[0] = const
        return self._coeffs, tuple(coeffs)

    def __add__(self, other: Union["TruncatedSeries", PolyLike]) -> "TruncatedSeries":
        a, b = self._common(other)
        return TruncatedSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self._coeffs])

    def __sub__(self, other: Union["TruncatedSeries", PolyLike]) -> "TruncatedSeries":
        a, b = self._common(other)
        return TruncatedSeries([x - y for x, y in zip(a, b)])

    def __rsub__(self, other: Union["TruncatedSeries", PolyLike]) -> "TruncatedSeries":
        return -(self - other)

    def __mul__(self, other: Union["TruncatedSeries", PolyLike]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            poly = MultiPoly.coerce(other)
            return TruncatedSeries([c * poly for c in self._coeffs])
        n = min(self.order, other.order)
        a = self._coeffs
        b = other._coeffs
        zero = MultiPoly.zero()
        out = []
        for k in range(n):
            acc = zero
            for i in range(k + 1):
                ai = a[i]
                bj = b[k - i]
                if ai.is_zero() or bj.is_zero():
                    continue
                acc = acc + ai * bj
            out.append(acc)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def scale(self, value: Rational) -> "TruncatedSeries":
        c = _as_fraction(value)
        return TruncatedSeries([p.scale(c) for p in self._coeffs])

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if exponent < 0:
            raise ValueError("negative series power")
        result = TruncatedSeries.one(self.order)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self._coeffs):
            if not c.is_zero():
                parts.append(f"({c})*x^{k}" if k else f"({c})")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(x^{self.order})"

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order})"

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [c.to_json_obj() for c in self._coeffs],
        }

    @classmethod
    def from_json_obj(cls, data: Mapping) -> "TruncatedSeries":
        coeffs = [MultiPoly.from_json_obj(c) for c in data["coeffs"]]
        if len(coeffs) != int(data["order"]):
            raise ValueError("series JSON order does not match coefficient count")
        return cls(coeffs)


# ---------------------------------------------------------------------------
# Module-level operation aliases (polynomials)
# ---------------------------------------------------------------------------


def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact sum of two polynomials."""
    return a + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact product of two polynomials."""
    return a * b


def poly_scale(a: MultiPoly, value: Rational) -> MultiPoly:
    """Multiply a polynomial by an exact rational."""
    return a.scale(value)


# ---------------------------------------------------------------------------
# Series operations
# ---------------------------------------------------------------------------


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Sum, truncated to the smaller order."""
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, truncated to the smaller order."""
    return a * b


def series_inv(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the constant term must be a nonzero rational."""
    c0 = s.coefficient(0).as_constant()
    if c0 is None or not c0:
        raise NonInvertibleConstantTerm(
            f"constant term {s.coefficient(0)} is not a nonzero rational"
        )
    return series_div(TruncatedSeries.one(s.order), s)


def series_div(num: TruncatedSeries, den: TruncatedSeries) -> TruncatedSeries:
    """Exact quotient num/den, truncated to the smaller order.

    The divisor's constant term must be a nonzero rational, or a single
    monomial that divides exactly at every step of the long division
    (each step's division is verified; an inexact step raises
    :class:`NonInvertibleConstantTerm`).
    """
    n = min(num.order, den.order)
    a = num.truncate(n).coeffs
    b = den.truncate(n).coeffs
    c0 = b[0]
    const = c0.as_constant()
    monomial = None
    if const is not None:
        if not const:
            raise NonInvertibleConstantTerm("divisor has zero constant term")
    else:
        monomial = c0.single_term()
        if monomial is None:
            raise NonInvertibleConstantTerm(
                f"divisor constant term {c0} is neither a rational nor a monomial"
            )
    out: list[MultiPoly] = []
    for k in range(n):
        acc = a[k]
        for j in range(1, k + 1):
            if b[j].is_zero() or out[k - j].is_zero():
                continue
            acc = acc - b[j] * out[k - j]
        if const is not None:
            out.append(acc.scale(1 / const))
        else:
            out.append(acc.divide_exact(c0))
    return TruncatedSeries(out)


def series_sqrt(s: TruncatedSeries) -> TruncatedSeries:
    """Square root with constant term 1, by Newton iteration.

    The iteration t <- (t + s/t)/2 doubles the number of correct
    coefficients each round; each round verifies the gained order by
    re-expanding t^2 - s and aborts loudly if accuracy stalls.
    """
    if s.coefficient(0) != MultiPoly.one():
        raise ConstantTermNotOne(
            f"series square root needs constant term 1, got {s.coefficient(0)}"
        )
    n = s.order
    t = TruncatedSeries.one(1)
    correct = 1
    while correct < n:
        target = min(2 * correct, n)
        s_part = s.truncate(target)
        t_part = t._padded(target)
        t_new = (t_part + series_div(s_part, t_part)).scale(_HALF)
        residual = t_new * t_new - s_part
        gained = residual.valuation()
        if gained is not None and gained < target:
            raise NoConvergence(
                f"square-root iteration stalled at order {gained} (target {target})"
            )
        t = t_new
        correct = target
    return t


def solve_quadratic(
    a: TruncatedSeries, b: TruncatedSeries, c: TruncatedSeries
) -> TruncatedSeries:
    """The power-series solution F of a*F^2 - b*F + c = 0 with F(0) = c(0)/b(0).

    Coefficients are extracted one order at a time; the linearization
    denominator 2*a(0)*F(0) - b(0) must be a nonzero rational.  The full
    residual is re-expanded at the end and must vanish identically.
    """
    n = min(a.order, b.order, c.order)
    A = a.truncate(n).coeffs
    B = b.truncate(n).coeffs
    C = c.truncate(n).coeffs
    b0 = B[0].as_constant()
    if b0 is None or not b0:
        raise NoSeriesSolution(
            f"leading coefficient b(0) = {B[0]} is not a nonzero rational"
        )
    f0 = C[0].scale(1 / b0)
    if not (A[0] * f0 * f0 - B[0] * f0 + C[0]).is_zero():
        raise NoSeriesSolution(
            "F(0) = c(0)/b(0) does not satisfy the quadratic at order 0"
        )
    denom_poly = A[0].scale(2) * f0 - B[0]
    denom = denom_poly.as_constant()
    if denom is None or not denom:
        raise NoSeriesSolution(
            f"linearization denominator {denom_poly} is not a nonzero rational"
        )
    f: list[MultiPoly] = [f0]
    zero = MultiPoly.zero()
    for k in range(1, n):
        # Residual coefficient at x^k with the unknown f_k set to 0.
        acc = C[k]
        for i in range(k + 1):
            if B[i].is_zero():
                continue
            fj = f[k - i] if k - i < len(f) else zero
            if not fj.is_zero():
                acc = acc - B[i] * fj
        for i in range(k + 1):
            Ai = A[i]
            if Ai.is_zero():
                continue
            conv = zero
            for j in range(k - i + 1):
                l = k - i - j
                fj = f[j] if j < len(f) else zero
                fl = f[l] if l < len(f) else zero
                if fj.is_zero() or fl.is_zero():
                    continue
                conv = conv + fj * fl
            if not conv.is_zero():
                acc = acc + Ai * conv
        # acc + (2*a0*f0 - b0) * f_k = 0
        f.append(acc.scale(-1 / denom))
    result = TruncatedSeries(f)
    if not (a.truncate(n) * result * result - b.truncate(n) * result + c.truncate(n)).is_zero():
        raise NoSeriesSolution("computed series does not satisfy the quadratic")
    return result


def solve_poly_functional(
    coeffs: Sequence[TruncatedSeries], y0: Rational
) -> TruncatedSeries:
    """Solve sum_i coeffs[i] * Y^i = 0 for a series Y with Y(0) = y0.

    Newton iteration with order doubling; every round re-expands the
    defect and must at least double the vanishing order, otherwise
    :class:`NoConvergence` is raised.  The derivative at the seed must
    have an invertible (nonzero rational) constant term, otherwise
    :class:`SingularDerivative` is raised.
    """
    if len(coeffs) < 2:
        raise ValueError("need a polynomial of degree >= 1 in Y")
    y0 = _as_fraction(y0)
    n = min(c.order for c in coeffs)
    P = [c.truncate(n) for c in coeffs]
    dP = [P[i].scale(i) for i in range(1, len(P))]

    def eval_poly(parts: Sequence[TruncatedSeries], y: TruncatedSeries) -> TruncatedSeries:
        acc = parts[-1].truncate(y.order)
        for i in range(len(parts) - 2, -1, -1):
            acc = acc * y + parts[i].truncate(y.order)
        return acc

    # Seed checks at order 0.
    seed = TruncatedSeries.constant(y0, 1)
    d0 = eval_poly(dP, seed).coefficient(0).as_constant()
    if d0 is None or not d0:
        raise SingularDerivative(
            f"derivative constant term at the seed is {eval_poly(dP, seed).coefficient(0)}"
        )
    if not eval_poly(P, seed).coefficient(0).is_zero():
        raise NoConvergence(
            f"seed value {y0} does not satisfy the equation at order 0"
        )

    y = seed
    correct = 1
    while correct < n:
        target = min(2 * correct, n)
        y_part = y._padded(target)
        defect = eval_poly(P, y_part)
        deriv = eval_poly(dP, y_part)
        y_new = y_part - series_div(defect, deriv)
        check = eval_poly(P, y_new)
        gained = check.valuation()
        if gained is not None and gained < target:
            raise NoConvergence(
                f"Newton iteration stalled at order {gained} (target {target})"
            )
        y = y_new
        correct = target
    if not eval_poly(P, y).is_zero():
        raise NoConvergence("computed series does not satisfy the equation")
    return y


def catalan_series(order: int) -> TruncatedSeries:
    """The Catalan number series 1 + x + 2x^2 + 5x^3 + ... mod x^order.

    Computed two independent ways — by radical, (1 - sqrt(1-4x))/(2x),
    and by the quadratic convolution recurrence — and asserted equal.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    radicand = TruncatedSeries.from_x_poly({0: 1, 1: -4}, order + 1)
    numerator = TruncatedSeries.one(order + 1) - series_sqrt(radicand)
    by_radical = numerator.shift_down(1).scale(_HALF)

    values = [Fraction(1)]
    for n in range(1, order):
        values.append(sum((values[i] * values[n - 1 - i] for i in range(n)), Fraction(0)))
    by_recurrence = TruncatedSeries([MultiPoly.const(v) for v in values])

    assert by_radical == by_recurrence, "catalan series cross-check failed"
    return by_recurrence
