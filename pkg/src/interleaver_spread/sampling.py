"""Seeded Monte Carlo over uniformly random interleavers.

Randomness comes from numpy's PCG64 (128-bit state, period 2**128). Trials
are cut into blocks of ``block_size``; block ``b`` draws from
``PCG64(SeedSequence(seed, spawn_key=(b,)))``. Hit counts are merged by
addition, so reports depend only on ``(seed, block_size)`` and never on the
number of worker threads.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .bounds import s_max
from .spread import Permutation, spread_batch, spread_windowed

__all__ = [
    "DEFAULT_BLOCK_SIZE",
    "SampleReport",
    "SearchResult",
    "make_rng",
    "random_permutation",
    "random_permutations",
    "wilson_interval",
    "empirical_distribution",
    "estimate_prob_at_least",
    "search_spread",
]

DEFAULT_BLOCK_SIZE = 2048
SEARCH_CHUNK = 32
SEED_MAX = 2**64 - 1


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int, block: int | None = None) -> np.random.Generator:
    """Generator for ``seed`` (and optionally one trial block of it)."""
    seed = _check_seed(seed)
    key = () if block is None else (block,)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation of ``{0, ..., n-1}`` (Fisher-Yates, unbiased bounded draws)."""
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")
    return Permutation(tuple(rng.permutation(n).tolist()))


def random_permutations(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform permutations as rows of an array."""
    base = np.broadcast_to(np.arange(n, dtype=np.int64), (count, n))
    return rng.permuted(base, axis=1)


def wilson_interval(hits: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    # clamp so the interval always brackets the point estimate despite rounding
    return max(0.0, min(centre - half, p)), min(1.0, max(centre + half, p))


@dataclass(frozen=True)
class SampleReport:
    n: int
    s: int
    trials: int
    hits: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int

    @classmethod
    def from_counts(cls, n: int, s: int, trials: int, hits: int, seed: int) -> "SampleReport":
        lo, hi = wilson_interval(hits, trials)
        return cls(n, s, trials, hits, hits / trials, lo, hi, seed)


@dataclass(frozen=True)
class SearchResult:
    found: Permutation | None
    attempts: int
    seed: int


def _block_histogram(n: int, seed: int, block: int, size: int) -> Counter:
    arr = random_permutations(n, size, make_rng(seed, block))
    values, freq = np.unique(spread_batch(arr), return_counts=True)
    return Counter(dict(zip(values.tolist(), freq.tolist())))


def empirical_distribution(
    n: int,
    trials: int,
    seed: int,
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> dict[int, int]:
    """Histogram ``spread -> count`` over ``trials`` uniform permutations."""
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")
    if trials < 1:
        raise ValueError("trials must be positive")
    seed = _check_seed(seed)
    sizes = [min(block_size, trials - start) for start in range(0, trials, block_size)]
    jobs = list(enumerate(sizes))

    def run(job):
        b, size = job
        return _block_histogram(n, seed, b, size)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return dict(sorted(total.items()))


def estimate_prob_at_least(
    n: int,
    s: int,
    trials: int,
    seed: int,
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> SampleReport:
    """Fraction of sampled permutations with spread >= ``s``, with a 95% Wilson interval."""
    if s < 2:
        raise ValueError(f"spread threshold must be at least 2, got {s}")
    hist = empirical_distribution(n, trials, seed, threads=threads, block_size=block_size)
    hits = sum(c for k, c in hist.items() if k >= s)
    return SampleReport.from_counts(n, s, trials, hits, seed)


def search_spread(n: int, s: int, seed: int, max_attempts: int) -> SearchResult:
    """Draw uniform permutations until one reaches spread ``s``.

    Draws are made in chunks of ``SEARCH_CHUNK`` from a single generator and
    ``attempts`` counts permutations up to and including the first hit.
    """
    if s < 2:
        raise ValueError(f"spread target must be at least 2, got {s}")
    if s > s_max(n):
        raise ValueError(f"no interleaver of blocklength {n} has spread {s} (max {s_max(n)})")
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    seed = _check_seed(seed)
    rng = make_rng(seed)
    done = 0
    while done < max_attempts:
        size = min(SEARCH_CHUNK, max_attempts - done)
        arr = random_permutations(n, size, rng)
        hit = np.flatnonzero(spread_batch(arr) >= s)
        if hit.size:
            k = int(hit[0])
            found = Permutation(tuple(arr[k].tolist()))
            # do not trust the batch kernel alone
            assert spread_windowed(found) >= s
            return SearchResult(found, done + k + 1, seed)
        done += size
    return SearchResult(None, max_attempts, seed)
