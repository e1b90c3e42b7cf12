"""Rational motive classes: Laurent numerators over factored (L^d - 1) denominators.

The computational ring is the localization of ZZ[L, L^-1] at the
multiplicative set generated by the polynomials L^d - 1.  Every class is
stored as a Laurent-polynomial numerator over a multiset of denominator
factors (L^d - 1)^m which is never expanded; cancellation happens by trial
exact division only, so representations are not unique and equality is
decided by cross-multiplication (via subtraction).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .laurent import LaurentPolynomial, NotDivisible, ZeroBase

__all__ = [
    "MotiveClass",
    "CompletedSeries",
    "NotInvertible",
    "PoleAtPoint",
    "ZeroBase",
]


class NotInvertible(ArithmeticError):
    """The class is not a unit of the computational ring."""


class PoleAtPoint(ArithmeticError):
    """A denominator factor vanishes at the evaluation point."""


@lru_cache(maxsize=None)
def _factor(d: int) -> LaurentPolynomial:
    """The denominator factor L^d - 1."""
    return LaurentPolynomial({d: 1, 0: -1})


def _expand_factors(factors: Iterable[tuple[int, int]]) -> LaurentPolynomial:
    out = LaurentPolynomial.one()
    for d, m in factors:
        f = _factor(d)
        for _ in range(m):
            out = out * f
    return out


class MotiveClass:
    """A class of the computational subring, normalized on construction.

    Normalization cancels every denominator factor that exactly divides the
    numerator, greedily, until none does.  Signs live in the numerator.
    """

    __slots__ = ("_num", "_den")

    def __init__(
        self,
        numerator: int | LaurentPolynomial,
        denominator: Iterable[tuple[int, int]] = (),
    ):
        num = LaurentPolynomial.coerce(numerator)
        merged: dict[int, int] = {}
        for d, m in denominator:
            if d < 1 or m < 1:
                raise ValueError(f"denominator factor (L^{d}-1)^{m} is malformed")
            merged[d] = merged.get(d, 0) + m
        if num.is_zero:
            merged.clear()
        else:
            for d in sorted(merged):
                f = _factor(d)
                while merged[d] > 0:
                    try:
                        num = num.exact_divide(f)
                    except NotDivisible:
                        break
                    merged[d] -= 1
        self._num = num
        self._den = tuple(sorted((d, m) for d, m in merged.items() if m > 0))

    # -- constructors and accessors ------------------------------------------

    @classmethod
    def zero(cls) -> MotiveClass:
        return cls(0)

    @classmethod
    def one(cls) -> MotiveClass:
        return cls(1)

    @classmethod
    def lefschetz(cls, power: int = 1) -> MotiveClass:
        """The class L^power."""
        return cls(LaurentPolynomial.monomial(power))

    @staticmethod
    def coerce(value: int | LaurentPolynomial | MotiveClass) -> MotiveClass:
        if isinstance(value, MotiveClass):
            return value
        return MotiveClass(value)

    @property
    def numerator(self) -> LaurentPolynomial:
        return self._num

    @property
    def denominator(self) -> tuple[tuple[int, int], ...]:
        """Factors as (d, multiplicity) pairs, ascending in d."""
        return self._den

    @property
    def is_zero(self) -> bool:
        return self._num.is_zero

    def denominator_polynomial(self) -> LaurentPolynomial:
        """The expanded product of all denominator factors."""
        return _expand_factors(self._den)

    def is_polynomial(self) -> bool:
        return not self._den

    # -- ring structure --------------------------------------------------------

    def _den_map(self) -> dict[int, int]:
        return dict(self._den)

    def __add__(self, other: int | LaurentPolynomial | MotiveClass) -> MotiveClass:
        other = MotiveClass.coerce(other)
        if not self._den and not other._den:
            return MotiveClass(self._num + other._num)
        mine, theirs = self._den_map(), other._den_map()
        common = {d: max(mine.get(d, 0), theirs.get(d, 0)) for d in mine.keys() | theirs.keys()}
        lift_a = _expand_factors((d, m - mine.get(d, 0)) for d, m in common.items() if m > mine.get(d, 0))
        lift_b = _expand_factors((d, m - theirs.get(d, 0)) for d, m in common.items() if m > theirs.get(d, 0))
        return MotiveClass(self._num * lift_a + other._num * lift_b, common.items())

    __radd__ = __add__

    def __neg__(self) -> MotiveClass:
        neg = MotiveClass.__new__(MotiveClass)
        neg._num = -self._num
        neg._den = self._den
        return neg

    def __sub__(self, other: int | LaurentPolynomial | MotiveClass) -> MotiveClass:
        return self + (-MotiveClass.coerce(other))

    def __rsub__(self, other: int | LaurentPolynomial | MotiveClass) -> MotiveClass:
        return (-self) + other

    def __mul__(self, other: int | LaurentPolynomial | MotiveClass) -> MotiveClass:
        other = MotiveClass.coerce(other)
        mine = self._den_map()
        for d, m in other._den:
            mine[d] = mine.get(d, 0) + m
        return MotiveClass(self._num * other._num, mine.items())

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MotiveClass:
        if n < 0:
            return self.invert() ** (-n)
        result = MotiveClass.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (MotiveClass, LaurentPolynomial, int)):
            return NotImplemented
        return (self - MotiveClass.coerce(other)).is_zero

    def __hash__(self) -> int:  # pragma: no cover - representations are not unique
        raise TypeError("MotiveClass is unhashable; representations are not canonical")

    def invert(self) -> MotiveClass:
        """Inverse, when the numerator is (up to sign and a power of L) a
        product of factors (L^d - 1); detected by repeated exact division,
        largest candidate degree first.  Raises NotInvertible otherwise.
        """
        if self._num.is_zero:
            raise NotInvertible("zero is not invertible")
        v = self._num.valuation()
        rest = self._num.shift(-v)
        found: dict[int, int] = {}
        while not rest.is_zero and rest.degree() > 0:
            for d in range(rest.degree(), 0, -1):
                try:
                    rest = rest.exact_divide(_factor(d))
                except NotDivisible:
                    continue
                found[d] = found.get(d, 0) + 1
                break
            else:
                raise NotInvertible(f"numerator {self._num} is not a unit of the subring")
        unit = rest.coefficient(0)
        if unit not in (1, -1):
            raise NotInvertible(f"constant factor {unit} is not a unit over ZZ")
        new_num = self.denominator_polynomial().shift(-v) * unit
        return MotiveClass(new_num, found.items())

    # -- evaluation and expansion ---------------------------------------------

    def eval_at(self, point: int | Fraction) -> Fraction:
        """Exact rational value at L = point.

        Raises PoleAtPoint when some denominator factor vanishes there and
        ZeroBase when point is 0 under a negative numerator exponent.
        """
        point = Fraction(point)
        denominator = Fraction(1)
        for d, m in self._den:
            f = point**d - 1
            if f == 0:
                raise PoleAtPoint(f"factor L^{d}-1 vanishes at {point}")
            denominator *= f**m
        return self._num.evaluate(point) / denominator

    def expand_at_infinity(self, depth: int) -> CompletedSeries:
        """Laurent expansion in L^-1, exact above exponent -depth.

        Each factor 1/(L^d - 1) is expanded as the geometric series
        L^-d + L^-2d + ...; the product is truncated at exponent -depth.
        """
        if depth < 1:
            raise ValueError("depth must be at least 1")
        if self._num.is_zero:
            return CompletedSeries({}, depth)
        total_shift = sum(d * m for d, m in self._den)
        cutoff = depth - total_shift + self._num.degree()
        series = _geometric_product(self._den, max(cutoff, 0))
        terms: dict[int, int] = {}
        for e, c in self._num.terms.items():
            base = e - total_shift
            for k, p in enumerate(series):
                if p == 0:
                    continue
                exponent = base - k
                if exponent <= -depth:
                    break
                terms[exponent] = terms.get(exponent, 0) + c * p
        return CompletedSeries(terms, depth)

    def laurent_expand_at_zero(self, order: int) -> LaurentPolynomial:
        """Power-series expansion around L = 0, truncated below L^order.

        Every factor L^d - 1 is a unit at 0, so only the numerator can
        contribute a (finite) pole order.
        """
        if self._num.is_zero:
            return LaurentPolynomial.zero()
        v = self._num.valuation()
        cutoff = order - v
        if cutoff <= 0:
            return LaurentPolynomial.zero()
        series = _geometric_product(self._den, cutoff)
        sign = -1 if sum(m for _, m in self._den) % 2 else 1
        terms: dict[int, int] = {}
        for e, c in self._num.terms.items():
            c *= sign
            for k, p in enumerate(series):
                if p == 0:
                    continue
                exponent = e + k
                if exponent >= order:
                    break
                terms[exponent] = terms.get(exponent, 0) + c * p
        return LaurentPolynomial(terms)

    # -- serialization and display ---------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "terms": self._num.to_json_terms(),
            "denominator": [[d, m] for d, m in self._den],
        }

    def display(self) -> str:
        """Factored rendering: global L-power, numerator, (L^d-1)^-m factors."""
        if self._num.is_zero:
            return "0"
        parts: list[str] = []
        num = self._num
        v = num.valuation()
        if v < 0:
            prefix = "L^%d" % v
            num = num.shift(-v)
            if num == 1:
                parts.append(prefix)
            elif num == -1:
                parts.append(f"-{prefix}")
            else:
                parts.append(prefix)
                parts.append(f"({num})")
        else:
            parts.append(str(num) if len(num.terms) == 1 else f"({num})")
        for d, m in self._den:
            base = "(L-1)" if d == 1 else f"(L^{d}-1)"
            parts.append(f"{base}^-{m}")
        rendered = " * ".join(parts)
        # single plain polynomial needs no parentheses
        if len(parts) == 1 and rendered.startswith("(") and rendered.endswith(")"):
            rendered = rendered[1:-1]
        return rendered

    def __str__(self) -> str:
        return self.display()

    def __repr__(self) -> str:
        return f"MotiveClass('{self.display()}')"


def _geometric_product(factors: tuple[tuple[int, int], ...], length: int) -> list[int]:
    """Coefficients of prod over (d, m) of (sum_k u^(k*d))^m up to u^(length-1)."""
    series = [0] * length
    if length == 0:
        return series
    series[0] = 1
    for d, m in factors:
        for _ in range(m):
            # multiply in place by 1/(1 - u^d)
            for i in range(d, length):
                series[i] += series[i - d]
    return series


class CompletedSeries:
    """Truncated Laurent series in L^-1: exponents above -depth are exact."""

    __slots__ = ("_terms", "_depth")

    def __init__(self, terms: dict[int, int] | Iterable[tuple[int, int]], depth: int):
        items = terms.items() if isinstance(terms, dict) else terms
        self._depth = depth
        self._terms = {e: c for e, c in items if c and e > -depth}

    @property
    def depth(self) -> int:
        return self._depth

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def _top(self) -> int:
        return max(self._terms) if self._terms else -self._depth

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CompletedSeries):
            return NotImplemented
        return self._depth == other._depth and self._terms == other._terms

    def __add__(self, other: CompletedSeries) -> CompletedSeries:
        depth = min(self._depth, other._depth)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return CompletedSeries(terms, depth)

    def __neg__(self) -> CompletedSeries:
        return CompletedSeries({e: -c for e, c in self._terms.items()}, self._depth)

    def __sub__(self, other: CompletedSeries) -> CompletedSeries:
        return self + (-other)

    def __mul__(self, other: CompletedSeries) -> CompletedSeries:
        # the unknown tail of one operand smears up to the top term of the other
        depth = min(self._depth - other._top(), other._depth - self._top())
        terms: dict[int, int] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = ea + eb
                if e > -depth:
                    terms[e] = terms.get(e, 0) + ca * cb
        return CompletedSeries(terms, depth)

    def as_laurent(self) -> LaurentPolynomial:
        """The known terms as a plain Laurent polynomial."""
        return LaurentPolynomial(self._terms)

    def to_json_dict(self) -> dict:
        return {
            "terms": [[e, str(c)] for e, c in sorted(self._terms.items(), reverse=True)],
            "depth": self._depth,
        }

    def __str__(self) -> str:
        tail = f"O(L^{-self._depth})"
        if not self._terms:
            return tail
        return f"{LaurentPolynomial(self._terms)} + {tail}"

    def __repr__(self) -> str:
        return f"CompletedSeries('{self}')"
