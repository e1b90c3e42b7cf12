"""Exact Laurent polynomials in the Lefschetz class L over the integers."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

# Kronecker packing pays off once both factors carry a few dozen terms;
# below that the plain dict convolution is faster.
_PACK_MIN_OPS = 512
_DIV_GUARD_BITS = 64


class NotDivisible(ArithmeticError):
    """Exact division was requested but the quotient does not exist."""


class ZeroBase(ArithmeticError):
    """A negative power of L was evaluated at 0."""


class LaurentPolynomial:
    """An integer-coefficient Laurent polynomial in the class L.

    Terms are stored sparsely as a map from exponent (possibly negative) to a
    nonzero arbitrary-precision coefficient.  The map is canonical: zero
    coefficients are never stored, and two values are equal exactly when
    their term maps are equal.

    >>> Lf = LaurentPolynomial.gen()
    >>> (Lf - 1) * (Lf + 1)
    LaurentPolynomial('L^2 - 1')
    >>> (Lf**3 - Lf**2).exact_divide(Lf - 1)
    LaurentPolynomial('L^2')
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        data: dict[int, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exponent, coefficient in items:
                if coefficient:
                    c = data.get(exponent, 0) + coefficient
                    if c:
                        data[exponent] = c
                    else:
                        data.pop(exponent, None)
        self._terms = data

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> LaurentPolynomial:
        return cls()

    @classmethod
    def one(cls) -> LaurentPolynomial:
        return cls({0: 1})

    @classmethod
    def gen(cls) -> LaurentPolynomial:
        """The generator L itself."""
        return cls({1: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPolynomial:
        return cls({exponent: coefficient})

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> LaurentPolynomial:
        # internal: terms already canonical, ownership transferred
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @staticmethod
    def coerce(value: int | LaurentPolynomial) -> LaurentPolynomial:
        if isinstance(value, LaurentPolynomial):
            return value
        if isinstance(value, int):
            return LaurentPolynomial({0: value})
        raise TypeError(f"cannot coerce {value!r} to a LaurentPolynomial")

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Copy of the exponent -> coefficient map."""
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest exponent; raises ValueError on the zero polynomial."""
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        """Smallest exponent; raises ValueError on the zero polynomial."""
        if not self._terms:
            raise ValueError("the zero polynomial has no valuation")
        return min(self._terms)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def items_desc(self) -> list[tuple[int, int]]:
        """Term list sorted by descending exponent."""
        return sorted(self._terms.items(), reverse=True)

    # -- ring operations ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other: int | LaurentPolynomial) -> LaurentPolynomial:
        other = LaurentPolynomial.coerce(other)
        small, big = self._terms, other._terms
        if len(small) > len(big):
            small, big = big, small
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other: int | LaurentPolynomial) -> LaurentPolynomial:
        return self + (-LaurentPolynomial.coerce(other))

    def __rsub__(self, other: int | LaurentPolynomial) -> LaurentPolynomial:
        return (-self) + other

    def __mul__(self, other: int | LaurentPolynomial) -> LaurentPolynomial:
        if isinstance(other, int):
            if other == 0:
                return LaurentPolynomial()
            return LaurentPolynomial._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPolynomial()
        if len(a) * len(b) >= _PACK_MIN_OPS:
            return LaurentPolynomial._raw(_mul_packed(a, b))
        return LaurentPolynomial._raw(_mul_dict(a, b))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPolynomial:
        if n < 0:
            if len(self._terms) == 1:
                ((e, c),) = self._terms.items()
                if c in (1, -1):
                    return LaurentPolynomial({-e: c}) ** (-n)
            raise ValueError("negative powers exist only for unit monomials")
        result = LaurentPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPolynomial:
        """Multiply by L^k."""
        if k == 0 or not self._terms:
            return self
        return LaurentPolynomial._raw({e + k: c for e, c in self._terms.items()})

    def exact_divide(self, other: int | LaurentPolynomial) -> LaurentPolynomial:
        """Exact quotient q with q * other == self, else NotDivisible."""
        other = LaurentPolynomial.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return LaurentPolynomial()
        va, vb = self.valuation(), other.valuation()
        a = {e - va: c for e, c in self._terms.items()}
        b = {e - vb: c for e, c in other._terms.items()}
        quotient = _div_packed(a, b)
        if quotient is None:
            quotient = _div_long(a, b)
        return LaurentPolynomial._raw({e + va - vb: c for e, c in quotient.items()})

    # -- evaluation and serialization ---------------------------------------

    def evaluate(self, point: int | Fraction) -> Fraction:
        """Exact value at L = point; ZeroBase if point is 0 under a negative exponent."""
        point = Fraction(point)
        if point == 0 and self._terms and self.valuation() < 0:
            raise ZeroBase("negative power of L evaluated at 0")
        total = Fraction(0)
        for e, c in self._terms.items():
            total += c * point**e
        return total

    def max_abs_coefficient(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    def to_json_terms(self) -> list[list]:
        """Terms as [exponent, decimal-string] pairs, descending exponent."""
        return [[e, str(c)] for e, c in self.items_desc()]

    @classmethod
    def from_json_terms(cls, data: Iterable[Iterable]) -> LaurentPolynomial:
        return cls({int(e): int(c) for e, c in data})

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for e, c in self.items_desc():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "L" if e == 1 else f"L^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}')"


def _mul_dict(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    out: dict[int, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _pack(terms: dict[int, int], shift: int, bits: int) -> int:
    total = 0
    for e, c in terms.items():
        total += c << (bits * (e - shift))
    return total


def _unpack(value: int, bits: int) -> list[int]:
    # balanced digit extraction; digits may be negative
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1
    digits: list[int] = []
    while value:
        d = value & mask
        if d >= half:
            d -= 1 << bits
        digits.append(d)
        value = (value - d) >> bits
    return digits


def _mul_packed(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    # Kronecker substitution: evaluate at L = 2^bits, multiply integers,
    # read digits back.  bits bounds every convolution coefficient strictly.
    wa = max(abs(c) for c in a.values())
    wb = max(abs(c) for c in b.values())
    bits = wa.bit_length() + wb.bit_length() + min(len(a), len(b)).bit_length() + 2
    va, vb = min(a), min(b)
    product = _pack(a, va, bits) * _pack(b, vb, bits)
    base = va + vb
    return {base + i: d for i, d in enumerate(_unpack(product, bits)) if d}


def _div_packed(a: dict[int, int], b: dict[int, int]) -> dict[int, int] | None:
    """Exact quotient of ordinary polynomials via packed integers.

    Returns the quotient dict, raises NotDivisible when the packed remainder
    is nonzero (sound: polynomial divisibility forces integer divisibility),
    or returns None when the unpacked candidate fails verification and the
    caller must fall back to long division.
    """
    wa = max(abs(c) for c in a.values())
    wb = max(abs(c) for c in b.values())
    bits = max(wa.bit_length(), wb.bit_length()) + _DIV_GUARD_BITS
    q_int, r_int = divmod(_pack(a, 0, bits), _pack(b, 0, bits))
    if r_int:
        raise NotDivisible("nonzero remainder")
    candidate = {i: d for i, d in enumerate(_unpack(q_int, bits)) if d}
    if not candidate:
        return None if a else {}
    check = _mul_packed(candidate, b) if len(candidate) * len(b) >= _PACK_MIN_OPS else _mul_dict(candidate, b)
    if check == a:
        return candidate
    return None


def _div_long(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    """Schoolbook exact division of ordinary polynomials, top degree down."""
    rem = dict(a)
    db = max(b)
    lead = b[db]
    quotient: dict[int, int] = {}
    while rem:
        dr = max(rem)
        if dr < db:
            raise NotDivisible("nonzero remainder")
        t, leftover = divmod(rem[dr], lead)
        if leftover:
            raise NotDivisible("leading coefficient does not divide")
        shift = dr - db
        quotient[shift] = t
        for e, c in b.items():
            pos = e + shift
            s = rem.get(pos, 0) - t * c
            if s:
                rem[pos] = s
            else:
                rem.pop(pos, None)
    return quotient
