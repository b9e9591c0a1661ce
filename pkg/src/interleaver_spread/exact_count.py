"""Exact counts of interleavers by spread.

``m0_n2(n)`` counts permutations of ``Z_n`` with no clockwise or
counterclockwise 2-sequence on the circle of positions, which is exactly
the set of interleavers with spread greater than 2. It is evaluated by
inclusion-exclusion over the set of circular successions in pure integer
arithmetic. :func:`oracle_distribution` enumerates all ``n!`` permutations
and is the independent ground truth for everything here.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .spread import spread_batch_naive

__all__ = [
    "ProbValue",
    "SpreadDistribution",
    "OracleCapError",
    "ORACLE_DEFAULT_CAP",
    "ORACLE_HARD_CAP",
    "factorial",
    "m0_n2",
    "m0_n2_printed",
    "k2",
    "exact_prob_gt2",
    "limit_prob_gt2",
    "oracle_distribution",
]

ORACLE_DEFAULT_CAP = 9
ORACLE_HARD_CAP = 11


@dataclass(frozen=True)
class ProbValue:
    """A probability held as a reduced fraction, with float and log views.

    ``float_view`` and ``log_view`` are derived from the integers directly,
    so they stay accurate when numerator and denominator are far outside
    double range.
    """

    numerator: int
    denominator: int
    mode: str = "exact"

    def __post_init__(self) -> None:
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(self.numerator, self.denominator)
        if g > 1:
            object.__setattr__(self, "numerator", self.numerator // g)
            object.__setattr__(self, "denominator", self.denominator // g)
        if not 0 <= self.numerator <= self.denominator:
            raise ValueError(f"{self.numerator}/{self.denominator} is not in [0, 1]")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ProbValue":
        return cls(q.numerator, q.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def log_view(self) -> float:
        if self.numerator == 0:
            return -math.inf
        # math.log accepts arbitrarily large ints
        return math.log(self.numerator) - math.log(self.denominator)

    @property
    def float_view(self) -> float:
        # int / int is correctly rounded; only tiny values need the log route
        value = self.numerator / self.denominator
        if value == 0.0 and self.numerator:
            return math.exp(self.log_view)
        return value

    def __float__(self) -> float:
        return self.float_view

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class SpreadDistribution:
    """Exact number of permutations of blocklength ``n`` at each spread value."""

    n: int
    counts: Mapping[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def at_least(self, s: int) -> int:
        return sum(c for k, c in self.counts.items() if k >= s)

    def prob_at_least(self, s: int) -> Fraction:
        return Fraction(self.at_least(s), math.factorial(self.n))


class OracleCapError(ValueError):
    """Raised when exhaustive enumeration is requested above the allowed cap."""


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")


def _succession_patterns(n: int, i: int) -> int:
    """Oriented ways to mark ``i`` of the ``n`` circular position edges.

    Chosen edges group into ``a`` runs; there are ``n/(n-i) * C(i-1, a-1) *
    C(n-i, a)`` edge sets with ``a`` runs, and each run is a clockwise or
    counterclockwise block, giving ``2**a``. Terms are stepped in ``a`` with
    the ratio ``2 (i-a)(n-i-a) / (a (a+1))``, all divisions exact.
    """
    r = n - i
    term = 2 * r  # a = 1: 2 * C(i-1, 0) * C(r, 1)
    total = term
    for a in range(1, min(i, r)):
        term = term * 2 * (i - a) * (r - a) // (a * (a + 1))
        total += term
    # the n/(n-i) factor keeps the sum integral
    q, rem = divmod(n * total, r)
    assert rem == 0
    return q


def m0_n2(n: int) -> int:
    """Number of interleavers of blocklength ``n`` with spread greater than 2.

    Inclusion-exclusion over circular successions: marking ``i < n`` edges
    leaves ``n - i`` blocks, which go round the circle of values in
    ``n * (n-i-1)!`` ways. Marking all ``n`` edges leaves only the ``2n``
    rotations and reflections of the identity.
    """
    _check_n(n)
    if n == 2:
        # both permutations of {0, 1} have spread 2
        return 0
    # sum_{i<n} c_i (n-i-1)! with c_0 = n, Horner form in j = n-1-i so every
    # multiplication is big-by-small
    acc = n
    for j in range(n - 2, -1, -1):
        i = n - 1 - j
        c = n * _succession_patterns(n, i)
        acc = (-c if i % 2 else c) + (j + 1) * acc
    acc += 2 * n if n % 2 == 0 else -2 * n
    if acc < 0:
        raise ArithmeticError(f"negative count {acc} for n={n}")
    return acc


def m0_n2_printed(n: int) -> int:
    """The double sum as commonly printed, ``N! + sum_i (-1)^i sum_a 2^a
    N/(N-i) C(i-1,a-1) C(N-i,a) (N-i)!``.

    Kept for comparison only: it omits the circular placement factor on the
    value side and the ``i = N`` term, and disagrees with enumeration from
    ``n = 6`` on (60 against 36). Not used by anything else.
    """
    _check_n(n)
    total = math.factorial(n)
    for i in range(1, n):
        inner = 0
        for a in range(1, min(i, n - i) + 1):
            inner += 2**a * math.comb(i - 1, a - 1) * math.comb(n - i, a)
        term = inner * n * math.factorial(n - i - 1)
        total += -term if i % 2 else term
    return total


def k2(n: int) -> int:
    """Number of interleavers of blocklength ``n`` with spread exactly 2."""
    return math.factorial(n) - m0_n2(n)


def exact_prob_gt2(n: int) -> ProbValue:
    """``m0_n2(n) / n!`` as a reduced fraction."""
    return ProbValue(m0_n2(n), math.factorial(n))


def limit_prob_gt2() -> float:
    """Large-blocklength limit of :func:`exact_prob_gt2`, ``exp(-2)``."""
    return math.exp(-2.0)


def _prefix_counts(n: int, first: int, chunk: int) -> Counter:
    rest = [v for v in range(n) if v != first]
    counts: Counter = Counter()
    it = itertools.permutations(rest)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        arr = np.empty((len(block), n), dtype=np.int64)
        arr[:, 0] = first
        arr[:, 1:] = block
        values, freq = np.unique(spread_batch_naive(arr), return_counts=True)
        counts.update(dict(zip(values.tolist(), freq.tolist())))
    return counts


def oracle_distribution(
    n: int, *, allow_large: bool = False, threads: int = 1, chunk: int = 50_000
) -> SpreadDistribution:
    """Enumerate all ``n!`` permutations and count them by spread.

    ``n`` is capped at :data:`ORACLE_DEFAULT_CAP`; ``allow_large`` raises the
    cap to :data:`ORACLE_HARD_CAP`. Work is split by the value at position 0
    and merged by addition, so the result does not depend on ``threads``.
    """
    _check_n(n)
    cap = ORACLE_HARD_CAP if allow_large else ORACLE_DEFAULT_CAP
    if n > cap:
        hint = "" if allow_large else f" (the override raises it to {ORACLE_HARD_CAP})"
        raise OracleCapError(f"oracle enumeration refused for n={n}: cap is {cap}{hint}")
    total: Counter = Counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda f: _prefix_counts(n, f, chunk), range(n)))
    else:
        parts = [_prefix_counts(n, f, chunk) for f in range(n)]
    for part in parts:
        total.update(part)
    return SpreadDistribution(n, dict(sorted(total.items())))
