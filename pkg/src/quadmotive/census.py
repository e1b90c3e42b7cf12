"""Brute-force oracle over prime fields of odd characteristic.

Enumerates every quadratic form on F_q^n, classifies by Gram rank, counts
isometry groups for small cases, and compares each tally against the exact
catalog formula evaluated at L = q.  The enumeration never consults the
closed forms, so agreement is an independent trust anchor for them.

Scans are data-parallel over disjoint coefficient-prefix ranges; each worker
owns a private tally and the partial tallies are merged by addition, so any
partition of the index space yields the same census.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .catalog import motive_bo, motive_gl, motive_quad

try:  # compiled kernels; the pure-Python paths below stay authoritative
    import numpy as _np

    from . import _kernels
except ImportError:  # pragma: no cover - numba-less environments
    _np = None
    _kernels = None

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "PrimeField",
    "QuadraticFormFq",
    "RankCensus",
    "CensusReport",
    "StackCountReport",
    "split_form",
    "gram_rank",
    "pullback",
    "random_invertible_matrix",
    "enumerate_rank_census",
    "isometry_group_order",
    "verify_census",
    "verify_stack_count",
]

DEFAULT_BUDGET = 2**31


class BudgetExceeded(RuntimeError):
    """A scan would visit more objects than the configured budget allows."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"scan of {required} objects exceeds budget {budget}")
        self.required = required
        self.budget = budget


def _is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """F_q for an odd prime q, with an inverse table and the element 1/2."""

    q: int
    inverses: tuple[int, ...]
    half: int

    @classmethod
    def create(cls, q: int) -> PrimeField:
        if not _is_odd_prime(q):
            raise ValueError(f"q must be an odd prime, got {q}")
        inverses = (0,) + tuple(pow(a, -1, q) for a in range(1, q))
        return cls(q, inverses, (q + 1) // 2)


def _pair_indices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class QuadraticFormFq:
    """Q(x) = sum_{i<=j} c_ij x_i x_j with coefficients reduced mod q.

    The coefficient array has length n(n+1)/2, row-major over pairs i <= j.
    """

    field: PrimeField
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        expected = self.n * (self.n + 1) // 2
        if len(self.coeffs) != expected:
            raise ValueError(f"expected {expected} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.field.q for c in self.coeffs):
            raise ValueError("coefficients must be reduced mod q")

    def polar_matrix(self) -> list[list[int]]:
        """Symmetric matrix B with B_ii = c_ii and B_ij = c_ij / 2.

        Valid in odd characteristic only; the radical of the form is the
        kernel of B.
        """
        q, half = self.field.q, self.field.half
        mat = [[0] * self.n for _ in range(self.n)]
        for (i, j), c in zip(_pair_indices(self.n), self.coeffs):
            if i == j:
                mat[i][i] = c
            else:
                v = (c * half) % q
                mat[i][j] = v
                mat[j][i] = v
        return mat

    def value(self, vector: tuple[int, ...]) -> int:
        q = self.field.q
        total = 0
        for (i, j), c in zip(_pair_indices(self.n), self.coeffs):
            total += c * vector[i] * vector[j]
        return total % q


def split_form(n: int, q: int) -> QuadraticFormFq:
    """The canonical split form: hyperbolic pairs plus one square if n is odd."""
    field = PrimeField.create(q)
    index = {p: k for k, p in enumerate(_pair_indices(n))}
    coeffs = [0] * len(index)
    if n % 2:
        coeffs[index[(0, 0)]] = 1
        for a in range(1, n - 1, 2):
            coeffs[index[(a, a + 1)]] = 1
    else:
        for a in range(0, n - 1, 2):
            coeffs[index[(a, a + 1)]] = 1
    return QuadraticFormFq(field, n, tuple(coeffs))


def _rank_mod(mat: list[list[int]], q: int) -> int:
    mat = [row[:] for row in mat]
    n = len(mat)
    rank = 0
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, n) if mat[r][col] % q), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = pow(mat[row][col], -1, q)
        for r in range(row + 1, n):
            factor = (mat[r][col] * inv) % q
            if factor:
                for c in range(col, n):
                    mat[r][c] = (mat[r][c] - factor * mat[row][c]) % q
        row += 1
        rank += 1
        if row == n:
            break
    return rank


def gram_rank(form: QuadraticFormFq) -> int:
    """Rank of the form: dimension minus the dimension of its radical."""
    return _rank_mod(form.polar_matrix(), form.field.q)


def pullback(form: QuadraticFormFq, g: list[list[int]]) -> QuadraticFormFq:
    """Coefficient array of the transformed form x -> Q(g x)."""
    q, half, n = form.field.q, form.field.half, form.n
    b = form.polar_matrix()
    bg = [[sum(b[i][k] * g[k][j] for k in range(n)) % q for j in range(n)] for i in range(n)]
    gtbg = [[sum(g[k][i] * bg[k][j] for k in range(n)) % q for j in range(n)] for i in range(n)]
    coeffs = []
    for i, j in _pair_indices(n):
        coeffs.append(gtbg[i][i] if i == j else (2 * gtbg[i][j]) % q)
    return QuadraticFormFq(form.field, n, tuple(coeffs))


def random_invertible_matrix(field: PrimeField, n: int, rng: random.Random) -> list[list[int]]:
    while True:
        g = [[rng.randrange(field.q) for _ in range(n)] for _ in range(n)]
        if _rank_mod(g, field.q) == n:
            return g


@dataclass(frozen=True)
class RankCensus:
    """Exact tallies N_{n,r}(q) of quadratic forms on F_q^n by rank."""

    q: int
    n: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def _ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    bounds = [0]
    for k in range(parts):
        bounds.append(bounds[-1] + step + (1 if k < extra else 0))
    return list(zip(bounds, bounds[1:]))


def _census_range_py(q: int, n: int, start: int, stop: int) -> list[int]:
    """Reference enumeration for one index range; same ordering as the kernel."""
    field = PrimeField.create(q)
    ncoef = n * (n + 1) // 2
    counts = [0] * (n + 1)
    digits = [0] * ncoef
    t = start
    for k in range(ncoef - 1, -1, -1):
        digits[k] = t % q
        t //= q
    for _ in range(stop - start):
        form = QuadraticFormFq(field, n, tuple(digits))
        counts[gram_rank(form)] += 1
        k = ncoef - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] == q:
                digits[k] = 0
                k -= 1
            else:
                break
    return counts


def enumerate_rank_census(
    q: int,
    n: int,
    budget: int = DEFAULT_BUDGET,
    parts: int = 1,
    workers: int = 1,
    force_python: bool = False,
) -> RankCensus:
    """Exhaustive rank census of all q^(n(n+1)/2) forms.

    `parts` splits the coefficient space into contiguous prefix ranges whose
    tallies are summed; `workers` runs ranges on threads.  Both leave the
    result unchanged.
    """
    field = PrimeField.create(q)
    total = q ** (n * (n + 1) // 2)
    if total > budget:
        raise BudgetExceeded(total, budget)
    ranges = _ranges(total, max(parts, workers))
    use_kernel = _kernels is not None and not force_python

    def scan(bounds: tuple[int, int]) -> list[int]:
        start, stop = bounds
        if use_kernel:
            counts = _np.zeros(n + 1, dtype=_np.int64)
            inverses = _np.array(field.inverses, dtype=_np.int64)
            _kernels.census_range(q, n, start, stop, inverses, counts)
            return [int(c) for c in counts]
        return _census_range_py(q, n, start, stop)

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(scan, ranges))
    else:
        partials = [scan(r) for r in ranges]
    counts = [sum(p[r] for p in partials) for r in range(n + 1)]
    return RankCensus(q, n, tuple(counts))


def _isometry_order_py(form: QuadraticFormFq) -> int:
    q, n = form.field.q, form.n
    count = 0
    digits = [0] * (n * n)
    for _ in range(q ** (n * n)):
        g = [digits[i * n : (i + 1) * n] for i in range(n)]
        if pullback(form, g).coeffs == form.coeffs and _rank_mod(g, q) == n:
            count += 1
        k = n * n - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] == q:
                digits[k] = 0
                k -= 1
            else:
                break
    return count


def isometry_group_order(
    form: QuadraticFormFq,
    budget: int = DEFAULT_BUDGET,
    force_python: bool = False,
) -> int:
    """Number of invertible matrices g with Q(g x) = Q(x), by full scan.

    The pulled-back form is compared through its polar matrix, which matches
    its coefficient array entry for entry in odd characteristic.
    """
    q, n = form.field.q, form.n
    total = q ** (n * n)
    if total > budget:
        raise BudgetExceeded(total, budget)
    if _kernels is None or force_python:
        return _isometry_order_py(form)
    polar = _np.array(form.polar_matrix(), dtype=_np.int64)
    inverses = _np.array(form.field.inverses, dtype=_np.int64)
    return int(_kernels.isometry_count_range(q, n, 0, total, polar, inverses))


@dataclass(frozen=True)
class CensusRow:
    r: int
    count: int
    formula_value: int
    match: bool


@dataclass(frozen=True)
class CensusReport:
    """Census tallies side by side with formula values at L = q."""

    q: int
    n: int
    rows: tuple[CensusRow, ...]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "pass": self.passed,
            "rows": [
                {
                    "r": row.r,
                    "count": str(row.count),
                    "formula_value": str(row.formula_value),
                    "match": row.match,
                }
                for row in self.rows
            ],
        }

    def csv_rows(self) -> list[list[str]]:
        return [
            [str(self.q), str(self.n), str(row.r), str(row.count), str(row.formula_value), str(row.match).lower()]
            for row in self.rows
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["q", "n", "r", "count", "formula_value", "match"])
        writer.writerows(self.csv_rows())
        return buf.getvalue()


def verify_census(q: int, n: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> CensusReport:
    """Compare the enumerated census against the stratum formulas at L = q."""
    census = enumerate_rank_census(q, n, budget=budget, workers=workers, parts=workers)
    rows = []
    passed = True
    for r in range(n + 1):
        value = motive_quad(n, r).eval_at(q)
        assert value.denominator == 1
        match = census.counts[r] == value.numerator
        passed = passed and match
        rows.append(CensusRow(r, census.counts[r], value.numerator, match))
    return CensusReport(q, n, tuple(rows), passed)


@dataclass(frozen=True)
class StackCountReport:
    """Groupoid-count consistency of the classifying-stack class at L = q.

    The quotient check compares the nondegenerate tally over the general
    linear group order with the stack formula.  For odd n within budget, the
    stack value is also compared against the reciprocal of the special
    orthogonal group order obtained from the isometry scan (a consistency
    check on the point-count heuristic, skipped with a warning over budget).
    """

    q: int
    n: int
    nondegenerate_count: int
    gl_order: int
    ratio: Fraction
    stack_value: Fraction
    quotient_match: bool
    so_order: int | None
    so_match: bool | None
    so_skipped: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "pass": self.passed,
            "nondegenerate_count": str(self.nondegenerate_count),
            "gl_order": str(self.gl_order),
            "ratio": str(self.ratio),
            "stack_value": str(self.stack_value),
            "quotient_match": self.quotient_match,
            "so_order": None if self.so_order is None else str(self.so_order),
            "so_match": self.so_match,
            "so_skipped": self.so_skipped,
        }


def verify_stack_count(q: int, n: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> StackCountReport:
    """Check counts[n] / |GL_n(F_q)| against the stack formula at L = q."""
    census = enumerate_rank_census(q, n, budget=budget, workers=workers, parts=workers)
    gl_value = motive_gl(n).eval_at(q)
    assert gl_value.denominator == 1
    gl_order = gl_value.numerator
    ratio = Fraction(census.counts[n], gl_order)
    stack_value = motive_bo(n).eval_at(q)
    quotient_match = ratio == stack_value
    so_order = None
    so_match = None
    so_skipped = False
    if n % 2 == 1:
        if q ** (n * n) > budget:
            so_skipped = True
        else:
            # in odd dimension the isometry group splits off a sign, so the
            # special orthogonal order is half the full scan
            so_order = isometry_group_order(split_form(n, q), budget=budget) // 2
            so_match = stack_value == Fraction(1, so_order)
    passed = quotient_match and (so_match is not False)
    return StackCountReport(
        q,
        n,
        census.counts[n],
        gl_order,
        ratio,
        stack_value,
        quotient_match,
        so_order,
        so_match,
        so_skipped,
        passed,
    )
