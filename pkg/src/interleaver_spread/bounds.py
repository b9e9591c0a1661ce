"""Lower bounds on the probability that a random interleaver has spread >= s.

Everything is built on the per-position probability

    q(n, s) = (n-2s+3)^(s-1) (n-2s+2)^(s-1) / ((n-1)(n-2)...(n-2(s-1)))

which is raised to ``n`` (basic bound) or ``n - floor(n/(s-1))`` (tight
bound). Results are carried in log space; for ``n <= EXACT_MAX_N`` an exact
rational is computed alongside by a separate integer route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_count import ProbValue

__all__ = [
    "EXACT_MAX_N",
    "BoundResult",
    "CountBound",
    "DomainError",
    "s_max",
    "per_position_prob",
    "per_position_log",
    "bound_basic",
    "bound_tight",
    "count_lower_bound",
    "asymptotic_bound",
]

EXACT_MAX_N = 64


class DomainError(ValueError):
    """Raised for (n, s) outside the region where a quantity is defined."""


def s_max(n: int) -> int:
    """Largest spread attainable at blocklength ``n``, ``isqrt(2n)``."""
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")
    return math.isqrt(2 * n)


def _check_domain(n: int, s: int) -> None:
    if s < 2:
        raise DomainError(f"spread target must be at least 2, got {s}")
    if s > s_max(n):
        raise DomainError(f"s={s} exceeds the maximum spread {s_max(n)} for n={n}")
    if n < 2 * (s - 1) + 1:
        raise DomainError(f"n={n} too small for s={s}: need n >= {2 * s - 1}")


def _first_pair_factor(n: int, s: int, m: int) -> Fraction:
    """Probability that positions ``i+m`` and ``i-m`` both avoid the forbidden
    value window of half-width ``s-m-1`` around ``p(i)``, with no other
    neighbour placed yet."""
    free = n + 1 - 2 * (s - m)
    return Fraction(free, n - 1) * Fraction(free - 1, n - 2)


def _conditional_pair_factor(n: int, s: int, m: int) -> Fraction:
    """Same as :func:`_first_pair_factor` given that the ``2(m-1)`` closer
    neighbours have already been placed outside their (wider) windows."""
    free = n + 1 - 2 * (s - m) - 2 * (m - 1)
    used = 2 * m - 1
    return Fraction(free, n - used) * Fraction(free - 1, n - used - 1)


def per_position_prob(n: int, s: int) -> ProbValue:
    """Exact probability that a fixed position meets the spread-``s`` condition
    against its ``2(s-1)`` nearest neighbours."""
    if s == 2:
        if n < 2:
            raise DomainError(f"blocklength must be at least 2, got {n}")
        return ProbValue(1, 1)
    _check_domain(n, s)
    num = (n - 2 * s + 3) ** (s - 1) * (n - 2 * s + 2) ** (s - 1)
    den = math.prod(range(n - 2 * (s - 1), n))
    if den <= 0:
        raise DomainError(f"nonpositive denominator for n={n}, s={s}")
    return ProbValue(num, den)


def per_position_log(n: int, s: int) -> float:
    """Natural log of :func:`per_position_prob`, evaluated in floating point."""
    if s == 2:
        return 0.0
    _check_domain(n, s)
    terms = [(s - 1) * math.log(n - 2 * s + 3), (s - 1) * math.log(n - 2 * s + 2)]
    terms.extend(-math.log(n - j) for j in range(1, 2 * (s - 1) + 1))
    return math.fsum(terms)


@dataclass(frozen=True)
class BoundResult:
    n: int
    s: int
    kind: str
    value_log: float
    value_rational: Fraction | None = None

    @property
    def value(self) -> float:
        return math.exp(self.value_log)

    @property
    def log10(self) -> float:
        return self.value_log / math.log(10)

    @property
    def above_s_max(self) -> bool:
        return self.s > s_max(self.n)


def _bound(n: int, s: int, kind: str, exponent: int) -> BoundResult:
    exact = n <= EXACT_MAX_N
    if s == 2:
        return BoundResult(n, s, kind, 0.0, Fraction(1) if exact else None)
    if s > s_max(n) or n < 2 * s - 1:
        return BoundResult(n, s, kind, -math.inf, Fraction(0) if exact else None)
    log_value = exponent * per_position_log(n, s)
    rational = per_position_prob(n, s).fraction ** exponent if exact else None
    return BoundResult(n, s, kind, log_value, rational)


def _check_ns(n: int, s: int) -> None:
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")
    if s < 2:
        raise ValueError(f"spread target must be at least 2, got {s}")


def bound_basic(n: int, s: int) -> BoundResult:
    """``q(n, s) ** n``; 1 for ``s = 2`` and 0 above ``s_max(n)``."""
    _check_ns(n, s)
    return _bound(n, s, "basic", n)


def bound_tight(n: int, s: int) -> BoundResult:
    """``q(n, s) ** (n - n // (s-1))``.

    Every ``(s-1)``-th position is implied by its neighbours, so those
    factors drop out. The floor makes the curve ripple in ``n``; that is
    kept as is.
    """
    _check_ns(n, s)
    exponent = n - n // (s - 1) if s > 2 else 0
    return _bound(n, s, "tight", exponent)


def asymptotic_bound(s: int) -> BoundResult:
    """Limit of :func:`bound_tight` as ``n`` grows, ``exp(-2 (s-2)^2)``.

    Returned with ``n = 0`` since it does not depend on blocklength.
    """
    if s < 2:
        raise ValueError(f"spread target must be at least 2, got {s}")
    return BoundResult(0, s, "asymptotic", -2.0 * (s - 2) ** 2)


@dataclass(frozen=True)
class CountBound:
    """Lower bound on the number of interleavers with spread >= s."""

    n: int
    s: int
    value_log: float
    value_rational: Fraction | None = None

    @property
    def value(self) -> float:
        return math.exp(self.value_log)

    @property
    def log10(self) -> float:
        return self.value_log / math.log(10)


def log_factorial(n: int) -> float:
    return math.fsum(math.log(k) for k in range(2, n + 1))


def count_lower_bound(n: int, s: int) -> CountBound:
    """``n! * bound_tight(n, s)``, in log space and exactly for small ``n``."""
    b = bound_tight(n, s)
    rational = None
    if b.value_rational is not None:
        rational = b.value_rational * math.factorial(n)
    return CountBound(n, s, log_factorial(n) + b.value_log, rational)
