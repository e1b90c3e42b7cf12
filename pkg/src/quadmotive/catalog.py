"""Named motive classes: Gaussian combinatorics, matrix groups, rank strata
of quadratic forms, and orthogonal classifying stacks.

All values live in the computational subring of motive.py.  Conventions:
empty products are 1, out-of-range binomial coefficients are 0, and the
special orthogonal classes in dimensions 1 and 2 are fixed to 1 and L - 1
so that identities can be range-tested uniformly; the classifying-stack
inverse identity is only asserted from dimension 3 up.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .laurent import LaurentPolynomial
from .motive import MotiveClass

__all__ = [
    "EvenDimension",
    "MotiveName",
    "KINDS",
    "gaussian_integer",
    "gaussian_factorial",
    "gaussian_binomial",
    "gaussian_factorial_inverse",
    "motive_affine",
    "motive_gl",
    "motive_so",
    "motive_quad_full",
    "motive_quad_full_recursive",
    "motive_quad",
    "motive_bo",
    "motive_bo_quotient",
    "motive_bso",
    "check_total_decomposition",
    "check_stack_identity",
]


class EvenDimension(ValueError):
    """The special orthogonal classifying stack is only computed in odd dimension."""


def gaussian_integer(n: int) -> LaurentPolynomial:
    """[n] = 1 + L + ... + L^(n-1); zero for n = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return LaurentPolynomial({e: 1 for e in range(n)})


@cache
def gaussian_factorial(n: int) -> LaurentPolynomial:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return LaurentPolynomial.one()
    return gaussian_factorial(n - 1) * gaussian_integer(n)


@cache
def gaussian_binomial(n: int, r: int) -> LaurentPolynomial:
    """[n]! / ([r]! [n-r]!), computed by exact division; 0 out of range.

    This is the class of the Grassmannian of r-planes in n-space.
    """
    if r < 0 or r > n:
        return LaurentPolynomial.zero()
    return gaussian_factorial(n).exact_divide(gaussian_factorial(r) * gaussian_factorial(n - r))


def gaussian_factorial_inverse(n: int) -> MotiveClass:
    """1/[n]! = (L-1)^n / prod_{k<=n} (L^k - 1), a unit of the subring."""
    if n < 0:
        raise ValueError("n must be non-negative")
    numerator = (LaurentPolynomial({1: 1, 0: -1})) ** n
    return MotiveClass(numerator, ((k, 1) for k in range(1, n + 1)))


def motive_affine(n: int) -> MotiveClass:
    """Class of affine n-space, L^n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return MotiveClass.lefschetz(n)


@cache
def motive_gl(n: int) -> MotiveClass:
    """[GL_n] = prod_{i=0}^{n-1} (L^n - L^i)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = LaurentPolynomial.one()
    for i in range(n):
        out = out * LaurentPolynomial({n: 1, i: -1})
    return MotiveClass(out)


@cache
def motive_so(n: int) -> MotiveClass:
    """Class of the split special orthogonal group in dimension n.

    Closed forms for n >= 3:
      [SO_{2r+1}] = L^r  * prod_{i=0}^{r-1} (L^{2r} - L^{2i})
      [SO_{2r}]   = L^-r * prod_{i=0}^{r-1} (L^{2r} - L^{2i})
    Conventions below the semisimple range: [SO_1] = 1 and [SO_2] = L - 1
    (the split torus).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return MotiveClass.one()
    if n == 2:
        return MotiveClass(LaurentPolynomial({1: 1, 0: -1}))
    r = n // 2
    out = LaurentPolynomial.monomial(r if n % 2 else -r)
    for i in range(r):
        out = out * LaurentPolynomial({2 * r: 1, 2 * i: -1})
    return MotiveClass(out)


@cache
def motive_quad_full(n: int) -> MotiveClass:
    """Closed form for the class of nondegenerate quadratic forms on n-space.

    prod_{i=0}^{r} (L^{2r+1} - L^{2i}) in odd dimension n = 2r+1 and
    prod_{i=1}^{r} (L^{2r+1} - L^{2i}) in even dimension n = 2r.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    r = n // 2
    lo = 0 if n % 2 else 1
    out = LaurentPolynomial.one()
    for i in range(lo, r + 1):
        out = out * LaurentPolynomial({2 * r + 1: 1, 2 * i: -1})
    return MotiveClass(out)


@cache
def motive_quad_full_recursive(n: int) -> MotiveClass:
    """Nondegenerate-locus class solved from the rank-stratification recurrence.

    Q_n = L^C(n+1,2) - sum_{r<n} [n choose n-r] Q_r, memoized by dimension.
    Kept independent of motive_quad_full so the two can cross-check.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return MotiveClass.one()
    total = MotiveClass.lefschetz(n * (n + 1) // 2)
    for r in range(n):
        total = total - MotiveClass(gaussian_binomial(n, n - r)) * motive_quad_full_recursive(r)
    return total


def motive_quad(n: int, r: int) -> MotiveClass:
    """Class of the rank-r stratum of quadratic forms on n-space.

    Fibration over the Grassmannian of radicals:
    [n choose n-r] times the full-rank class in r variables.
    """
    if not 0 <= r <= n:
        raise ValueError(f"rank {r} out of range for dimension {n}")
    return MotiveClass(gaussian_binomial(n, n - r)) * motive_quad_full(r)


def check_total_decomposition(n: int) -> bool:
    """L^C(n+1,2) equals the sum of all rank-stratum classes, exactly."""
    total = MotiveClass.zero()
    for r in range(n + 1):
        total = total + motive_quad(n, r)
    return total == MotiveClass.lefschetz(n * (n + 1) // 2)


@cache
def motive_bo(n: int) -> MotiveClass:
    """Class of the classifying stack of the orthogonal group in dimension n.

      L^-r * prod_{i=0}^{r-1} (L^{2r} - L^{2i})^-1   for n = 2r+1,
      L^r  * prod_{i=0}^{r-1} (L^{2r} - L^{2i})^-1   for n = 2r.

    Each factor is L^{2i} (L^{2(r-i)} - 1), so the class is stored as a
    single power of L over the factors (L^2-1)...(L^2r-1).  Dimension 1
    gives the empty product, i.e. 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    r = n // 2
    power = (-r if n % 2 else r) - r * (r - 1)
    return MotiveClass(
        LaurentPolynomial.monomial(power),
        ((2 * j, 1) for j in range(1, r + 1)),
    )


def motive_bo_quotient(n: int) -> MotiveClass:
    """The same class derived as [nondegenerate locus] / [GL_n]."""
    return motive_quad_full(n) * motive_gl(n).invert()


def motive_bso(n: int) -> MotiveClass:
    """Classifying-stack class of the special orthogonal group, odd n >= 3.

    In odd dimension it coincides with the full orthogonal one (and with the
    inverse of the special orthogonal group class); even dimensions are not
    computed.
    """
    if n % 2 == 0:
        raise EvenDimension(f"dimension {n} is even")
    if n < 3:
        raise ValueError("n must be at least 3")
    return motive_bo(n)


def check_stack_identity(n: int) -> bool:
    """BO times GL recovers the nondegenerate locus; from dimension 3 on,
    BO times SO is 1."""
    if motive_bo(n) * motive_gl(n) != motive_quad_full(n):
        return False
    if n >= 3 and motive_bo(n) * motive_so(n) != MotiveClass.one():
        return False
    return True


@dataclass(frozen=True)
class _Kind:
    arity: int
    describe: str
    build: object  # callable(*params) -> MotiveClass
    check: object = None  # optional callable(*params) raising ValueError


def _check_quad(n, r):
    if not 0 <= r <= n:
        raise ValueError(f"rank {r} out of range for dimension {n}")


def _check_grassmannian(r, n):
    if n < 0 or r < 0:
        raise ValueError("parameters must be non-negative")


KINDS: dict[str, _Kind] = {
    "gaussian-int": _Kind(1, "Gaussian integer [n]", lambda n: MotiveClass(gaussian_integer(n))),
    "gaussian-factorial": _Kind(1, "Gaussian factorial [n]!", lambda n: MotiveClass(gaussian_factorial(n))),
    "gaussian-binomial": _Kind(2, "Gaussian binomial [n choose r]", lambda n, r: MotiveClass(gaussian_binomial(n, r))),
    "grassmannian": _Kind(
        2,
        "class of the Grassmannian Gr(r, n)",
        lambda r, n: MotiveClass(gaussian_binomial(n, r)),
        _check_grassmannian,
    ),
    "gl": _Kind(1, "general linear group", motive_gl),
    "so": _Kind(1, "split special orthogonal group", motive_so),
    "quad": _Kind(2, "rank-r stratum of quadratic forms on n-space", motive_quad, _check_quad),
    "quad-full": _Kind(1, "nondegenerate quadratic forms on n-space", motive_quad_full),
    "bo": _Kind(1, "classifying stack of the orthogonal group", motive_bo),
    "bso": _Kind(1, "classifying stack of the special orthogonal group (odd n)", motive_bso),
    "affine": _Kind(1, "affine space L^n", motive_affine),
}


@dataclass(frozen=True)
class MotiveName:
    """A validated catalog key: a kind plus its integer parameters."""

    kind: str
    params: tuple[int, ...]

    def __post_init__(self):
        spec = KINDS.get(self.kind)
        if spec is None:
            raise ValueError(f"unknown motive kind {self.kind!r}")
        if len(self.params) != spec.arity:
            raise ValueError(f"{self.kind} takes {spec.arity} parameter(s), got {len(self.params)}")
        if any(p < 0 for p in self.params):
            raise ValueError("parameters must be non-negative")
        if spec.check is not None:
            spec.check(*self.params)

    def resolve(self) -> MotiveClass:
        """Build the named class (validation errors surface from the builder)."""
        return KINDS[self.kind].build(*self.params)
