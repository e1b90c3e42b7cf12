"""Truncated formal power series over motive classes and the generating-function
identities for the rank recurrence.

The series of interest:

  quad_egf(N)        sum_n Q_n x^n / [n]!   with Q_n the nondegenerate-locus
                     class taken from the recurrence solver
  parity_egf(N, p)   the even/odd auxiliary series whose x^n coefficient is the
                     closed-form product over (L^{2k+1} - L^{2i}) divided by [n]!
  q_exponential(N)   sum_n x^n / [n]!

plus the rescalings under x -> x/(1-L) and the partial Euler products they are
compared against.  Comparisons are exact wherever both sides are rational in L;
a genuinely infinite product is compared modulo L^M against a partial product
whose missing factors only touch higher powers of L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .catalog import gaussian_factorial_inverse
from .catalog import motive_quad_full_recursive
from .laurent import LaurentPolynomial
from .motive import MotiveClass, NotInvertible

__all__ = [
    "FormalSeries",
    "IdentityReport",
    "NotInvertibleConstant",
    "inv_one_minus_l",
    "q_exponential",
    "quad_egf",
    "parity_egf",
    "scale_variable",
    "scaled_closed_form_series",
    "parity_closed_form_literal",
    "triangular_weight_series",
    "euler_partial_product",
    "exp_reciprocal_partial_product",
    "even_partial_product",
    "check_recurrence_solution",
    "check_parity_substitution",
    "check_scaled_closed_form",
    "check_exp_product",
    "check_euler_identity",
]


class NotInvertibleConstant(ArithmeticError):
    """Reciprocal of a series whose constant term is not invertible."""


@dataclass(frozen=True, eq=False)
class FormalSeries:
    """Power series in x truncated at x^order, with MotiveClass coefficients."""

    coefficients: tuple[MotiveClass, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a series carries at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int | LaurentPolynomial | MotiveClass]) -> FormalSeries:
        return cls(tuple(MotiveClass.coerce(c) for c in coeffs))

    @classmethod
    def one(cls, order: int) -> FormalSeries:
        return cls((MotiveClass.one(),) + (MotiveClass.zero(),) * order)

    def coefficient(self, k: int) -> MotiveClass:
        return self.coefficients[k]

    def truncate(self, order: int) -> FormalSeries:
        if order >= self.order:
            return self
        return FormalSeries(self.coefficients[: order + 1])

    def __add__(self, other: FormalSeries) -> FormalSeries:
        n = min(self.order, other.order)
        return FormalSeries(tuple(self.coefficients[k] + other.coefficients[k] for k in range(n + 1)))

    def __sub__(self, other: FormalSeries) -> FormalSeries:
        n = min(self.order, other.order)
        return FormalSeries(tuple(self.coefficients[k] - other.coefficients[k] for k in range(n + 1)))

    def __mul__(self, other: FormalSeries) -> FormalSeries:
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = MotiveClass.zero()
            for i in range(k + 1):
                a = self.coefficients[i]
                b = other.coefficients[k - i]
                if not (a.is_zero or b.is_zero):
                    acc = acc + a * b
            out.append(acc)
        return FormalSeries(tuple(out))

    def mul_linear(self, c: MotiveClass) -> FormalSeries:
        """Multiply by (1 + c x) without a full Cauchy product."""
        out = [self.coefficients[0]]
        for k in range(1, self.order + 1):
            out.append(self.coefficients[k] + c * self.coefficients[k - 1])
        return FormalSeries(tuple(out))

    def mul_even_linear(self, c: MotiveClass) -> FormalSeries:
        """Multiply by (1 + c x^2)."""
        out = list(self.coefficients[:2]) if self.order >= 1 else [self.coefficients[0]]
        for k in range(2, self.order + 1):
            out.append(self.coefficients[k] + c * self.coefficients[k - 2])
        return FormalSeries(tuple(out))

    def reciprocal(self) -> FormalSeries:
        """Formal inverse; the constant term must be a unit."""
        try:
            r0 = self.coefficients[0].invert()
        except NotInvertible as exc:
            raise NotInvertibleConstant(str(exc)) from exc
        out = [r0]
        for n in range(1, self.order + 1):
            acc = MotiveClass.zero()
            for k in range(1, n + 1):
                a = self.coefficients[k]
                if not a.is_zero:
                    acc = acc + a * out[n - k]
            out.append(-(r0 * acc))
        return FormalSeries(tuple(out))

    def scale_variable(self, c: MotiveClass) -> FormalSeries:
        """Substitute x -> c x: the k-th coefficient picks up c^k."""
        out = [self.coefficients[0]]
        power = MotiveClass.one()
        for k in range(1, self.order + 1):
            power = power * c
            out.append(self.coefficients[k] * power)
        return FormalSeries(tuple(out))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(self.coefficients[k] == other.coefficients[k] for k in range(n + 1))

    def __str__(self) -> str:
        parts = [f"({c})x^{k}" for k, c in enumerate(self.coefficients) if not c.is_zero]
        return " + ".join(parts) if parts else "0"


def scale_variable(series: FormalSeries, c: MotiveClass) -> FormalSeries:
    return series.scale_variable(c)


def inv_one_minus_l() -> MotiveClass:
    """1/(1 - L), i.e. -1 over the factor (L - 1)."""
    return MotiveClass(-1, ((1, 1),))


def q_exponential(order: int) -> FormalSeries:
    """The L-deformed exponential: sum_n x^n / [n]!."""
    return FormalSeries(tuple(gaussian_factorial_inverse(n) for n in range(order + 1)))


def quad_egf(order: int) -> FormalSeries:
    """Exponential generating function of the nondegenerate-locus classes.

    Coefficients come from the recurrence solver, never from the closed form,
    so comparisons against closed forms are not circular.
    """
    return FormalSeries(
        tuple(motive_quad_full_recursive(n) * gaussian_factorial_inverse(n) for n in range(order + 1))
    )


def _stratum_product(k: int, lo: int) -> LaurentPolynomial:
    """prod_{i=lo}^{k} (L^{2k+1} - L^{2i})."""
    out = LaurentPolynomial.one()
    for i in range(lo, k + 1):
        out = out * LaurentPolynomial({2 * k + 1: 1, 2 * i: -1})
    return out


def parity_egf(order: int, parity: str) -> FormalSeries:
    """The auxiliary series supported on one parity.

    Even:  x^{2k} coefficient  prod_{i=1}^{k} (L^{2k+1} - L^{2i}) / [2k]!
    Odd:   x^{2k+1} coefficient prod_{i=0}^{k} (L^{2k+1} - L^{2i}) / [2k+1]!
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    coeffs = [MotiveClass.zero()] * (order + 1)
    if parity == "even":
        for k in range(0, order // 2 + 1):
            n = 2 * k
            coeffs[n] = MotiveClass(_stratum_product(k, 1)) * gaussian_factorial_inverse(n)
    else:
        k = 0
        while 2 * k + 1 <= order:
            n = 2 * k + 1
            coeffs[n] = MotiveClass(_stratum_product(k, 0)) * gaussian_factorial_inverse(n)
            k += 1
    return FormalSeries(tuple(coeffs))


def _alternating_base(k: int) -> MotiveClass:
    """L^{k(k+1)} / prod_{j=1}^{k} (L^{2j} - 1)."""
    return MotiveClass(
        LaurentPolynomial.monomial(k * (k + 1)),
        ((2 * j, 1) for j in range(1, k + 1)),
    )


def scaled_closed_form_series(order: int) -> FormalSeries:
    """Closed form of the EGF after x -> x/(1-L):

    (1 - x) * sum_k x^{2k} L^{k(k+1)} / ((L^2-1)...(L^{2k}-1)).
    """
    coeffs = [MotiveClass.zero()] * (order + 1)
    for k in range(0, order // 2 + 1):
        base = _alternating_base(k)
        coeffs[2 * k] = coeffs[2 * k] + base
        if 2 * k + 1 <= order:
            coeffs[2 * k + 1] = coeffs[2 * k + 1] - base
    return FormalSeries(tuple(coeffs))


def parity_closed_form_literal(order: int, parity: str) -> FormalSeries:
    """The displayed per-parity closed forms, taken literally.

    Both are supported on even powers x^{2k}, with coefficient
    +-L^{k(k+1)} / ((L^2-1)...(L^{2k}-1)); the sign is + for the even series
    and - for the odd one.  See check_parity_substitution for the status of
    the odd one.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    sign = 1 if parity == "even" else -1
    coeffs = [MotiveClass.zero()] * (order + 1)
    for k in range(0, order // 2 + 1):
        coeffs[2 * k] = _alternating_base(k) * sign
    return FormalSeries(tuple(coeffs))


def triangular_weight_series(order: int) -> FormalSeries:
    """sum_n L^C(n+1,2) x^n / [n]!."""
    return FormalSeries(
        tuple(
            MotiveClass.lefschetz(n * (n + 1) // 2) * gaussian_factorial_inverse(n)
            for n in range(order + 1)
        )
    )


def euler_partial_product(order: int, max_index: int) -> FormalSeries:
    """prod_{i=1}^{max_index} (1 + (1-L) L^i x), truncated at x^order."""
    out = FormalSeries.one(order)
    for i in range(1, max_index + 1):
        out = out.mul_linear(MotiveClass(LaurentPolynomial({i: 1, i + 1: -1})))
    return out


def exp_reciprocal_partial_product(order: int, max_index: int) -> FormalSeries:
    """prod_{i=0}^{max_index} (1 - (1-L) L^i x), truncated at x^order."""
    out = FormalSeries.one(order)
    for i in range(0, max_index + 1):
        out = out.mul_linear(MotiveClass(LaurentPolynomial({i + 1: 1, i: -1})))
    return out


def even_partial_product(order: int, max_index: int) -> FormalSeries:
    """(1 - x) prod_{k=1}^{max_index} (1 - L^{2k} x^2), truncated at x^order."""
    out = FormalSeries.one(order).mul_linear(MotiveClass(-1))
    for k in range(1, max_index + 1):
        out = out.mul_even_linear(MotiveClass(LaurentPolynomial.monomial(2 * k, -1)))
    return out


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check, serializable per the JSON interface."""

    identity: str
    order_x: int
    order_l: int | None
    passed: bool
    first_failure: dict | None
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "order_x": self.order_x,
            "order_L": self.order_l,
            "pass": self.passed,
            "first_failure": self.first_failure,
            "notes": list(self.notes),
        }


def _first_mismatch(lhs: FormalSeries, rhs: FormalSeries) -> dict | None:
    for k in range(min(lhs.order, rhs.order) + 1):
        if lhs.coefficients[k] != rhs.coefficients[k]:
            return {
                "index": k,
                "lhs": lhs.coefficients[k].display(),
                "rhs": rhs.coefficients[k].display(),
            }
    return None


def _first_mismatch_mod_l(lhs: FormalSeries, rhs: FormalSeries, order_l: int) -> dict | None:
    for k in range(min(lhs.order, rhs.order) + 1):
        a = lhs.coefficients[k].laurent_expand_at_zero(order_l)
        b = rhs.coefficients[k].laurent_expand_at_zero(order_l)
        if a != b:
            return {"index": k, "lhs": str(a), "rhs": str(b)}
    return None


def check_recurrence_solution(order: int) -> IdentityReport:
    """The EGF solved from the recurrence equals the even plus odd series."""
    lhs = quad_egf(order)
    rhs = parity_egf(order, "even") + parity_egf(order, "odd")
    failure = _first_mismatch(lhs, rhs)
    return IdentityReport("recurrence-solution", order, None, failure is None, failure)


def check_parity_substitution(order: int) -> IdentityReport:
    """Behaviour of the parity series under x -> x/(1-L).

    Verified exactly: the rescaled sum equals the alternating closed form,
    and the rescaled even series equals its displayed closed form.  The
    displayed odd closed form is supported on even powers and so cannot
    equal the rescaled odd series; its first discrepancy (the constant
    term, at k = 0) is recorded in the notes rather than guessed around.
    """
    c = inv_one_minus_l()
    even = parity_egf(order, "even").scale_variable(c)
    odd = parity_egf(order, "odd").scale_variable(c)
    failure = _first_mismatch(even + odd, scaled_closed_form_series(order))
    if failure is None:
        failure = _first_mismatch(even, parity_closed_form_literal(order, "even"))
    notes = []
    odd_literal = _first_mismatch(odd, parity_closed_form_literal(order, "odd"))
    if odd_literal is not None:
        notes.append(
            "displayed odd-parity closed form disagrees with the rescaled odd series "
            f"at x^{odd_literal['index']} (computed {odd_literal['lhs']}, displayed "
            f"{odd_literal['rhs']}); the sum-level identity is what is verified"
        )
    return IdentityReport("parity-substitution", order, None, failure is None, failure, tuple(notes))


def check_scaled_closed_form(order: int, order_l: int) -> IdentityReport:
    """The rescaled EGF equals its alternating closed form exactly, and the
    even infinite product modulo L^order_l."""
    if order_l < 1:
        raise ValueError("order_l must be at least 1")
    g = quad_egf(order).scale_variable(inv_one_minus_l())
    failure = _first_mismatch(g, scaled_closed_form_series(order))
    if failure is None:
        partial = even_partial_product(order, (order_l + 1) // 2)
        failure = _first_mismatch_mod_l(g, partial, order_l)
    return IdentityReport("scaled-closed-form", order, order_l, failure is None, failure)


def check_exp_product(order: int, order_l: int) -> IdentityReport:
    """The reciprocal of the deformed exponential equals the descending
    product prod_{i>=0} (1 - (1-L) L^i x) modulo L^order_l."""
    if order_l < 1:
        raise ValueError("order_l must be at least 1")
    lhs = q_exponential(order).reciprocal()
    rhs = exp_reciprocal_partial_product(order, order_l)
    failure = _first_mismatch_mod_l(lhs, rhs, order_l)
    return IdentityReport("exp-reciprocal-product", order, order_l, failure is None, failure)


def check_euler_identity(order: int, order_l: int) -> IdentityReport:
    """Euler's product identity and its consequence for the EGF.

    (a) prod_{i=1}^{M} (1 + (1-L) L^i x) equals sum_n L^C(n+1,2) x^n / [n]!
        modulo L^order_l;
    (b) quad_egf * q_exponential equals the same sum exactly.
    """
    if order_l < 1:
        raise ValueError("order_l must be at least 1")
    target = triangular_weight_series(order)
    failure = _first_mismatch_mod_l(euler_partial_product(order, order_l), target, order_l)
    if failure is None:
        failure = _first_mismatch(quad_egf(order) * q_exponential(order), target)
    return IdentityReport("euler-product", order, order_l, failure is None, failure)
