"""Permutations and the spread metric.

An interleaver of blocklength ``n`` is a permutation of ``{0, ..., n-1}``.
Its spread is the smallest value of ``|i-j|_n + |p(i)-p(j)|_n`` over all
pairs of distinct positions, where ``|a-b|_n`` is the circular distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Permutation",
    "PermutationError",
    "DuplicateValueError",
    "OutOfRangeValueError",
    "LengthError",
    "circ_dist",
    "spread",
    "spread_with_witness",
    "spread_windowed",
    "spread_batch",
    "spread_batch_naive",
    "validate_permutation",
    "parse_permutation",
    "format_permutation",
    "read_permutation",
    "write_permutation",
]


class PermutationError(ValueError):
    """Raised when a sequence is not a valid 0-based permutation."""


class DuplicateValueError(PermutationError):
    pass


class OutOfRangeValueError(PermutationError):
    pass


class LengthError(PermutationError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A validated bijection on ``{0, ..., n-1}`` with ``n >= 2``.

    Build instances through :func:`validate_permutation`; the constructor
    re-validates, so a ``Permutation`` is always well formed.
    """

    mapping: tuple[int, ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        _check_bijection(self.mapping)
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        object.__setattr__(self, "n", len(self.mapping))

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        return self.mapping[i]

    def __iter__(self):
        return iter(self.mapping)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mapping, dtype=np.int64)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))


def _check_bijection(raw: Sequence[int]) -> None:
    n = len(raw)
    if n < 2:
        raise LengthError(f"permutation length must be at least 2, got {n}")
    seen = bytearray(n)
    for pos, v in enumerate(raw):
        if isinstance(v, bool) or int(v) != v:
            raise PermutationError(f"non-integer value {v!r} at position {pos}")
        v = int(v)
        if not 0 <= v < n:
            raise OutOfRangeValueError(
                f"value {v} at position {pos} is outside 0..{n - 1}"
            )
        if seen[v]:
            raise DuplicateValueError(f"duplicate value {v} at position {pos}")
        seen[v] = 1


def validate_permutation(raw: Iterable[int]) -> Permutation:
    """Return a :class:`Permutation` or raise a specific :class:`PermutationError`."""
    return Permutation(tuple(raw))


def circ_dist(a: int, b: int, n: int) -> int:
    """Circular distance ``min(|a-b|, n-|a-b|)`` between indices of ``Z_n``."""
    if n < 2:
        raise ValueError(f"blocklength must be at least 2, got {n}")
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"indices ({a}, {b}) out of range for n={n}")
    d = abs(a - b)
    return min(d, n - d)


def _as_2d(batch) -> np.ndarray:
    arr = np.asarray(batch)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr.astype(np.int64, copy=False)


def _offset_min(arr: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-row minimum value distance over position pairs ``(i, i+d mod n)``."""
    n = arr.shape[1]
    diff = np.abs(arr - np.roll(arr, -d, axis=1))
    cd = np.minimum(diff, n - diff)
    where = cd.argmin(axis=1)
    return cd[np.arange(arr.shape[0]), where], where


def spread_batch_naive(batch) -> np.ndarray:
    """Spread of every row of ``batch``, scanning all pairs.

    Every unordered pair of positions at circular distance ``d`` appears as
    ``(i, i+d mod n)`` for exactly one ``d`` in ``1..n//2``.
    """
    arr = _as_2d(batch)
    n = arr.shape[1]
    best = np.full(arr.shape[0], np.iinfo(np.int64).max, dtype=np.int64)
    for d in range(1, n // 2 + 1):
        rowmin, _ = _offset_min(arr, d)
        np.minimum(best, d + rowmin, out=best)
    return best


def spread_batch(batch) -> np.ndarray:
    """Spread of every row of ``batch`` using the ``isqrt(2n)`` window.

    The spread never exceeds ``isqrt(2n)``, so pairs whose positions are at
    least that far apart cannot attain the minimum. Rows drop out as soon as
    no larger offset can improve them.
    """
    arr = _as_2d(batch)
    n = arr.shape[1]
    limit = math.isqrt(2 * n)
    best = np.full(arr.shape[0], limit, dtype=np.int64)
    active = np.arange(arr.shape[0])
    for d in range(1, min(limit - 1, n // 2) + 1):
        if active.size == 0:
            break
        rowmin, _ = _offset_min(arr[active], d)
        cand = d + rowmin
        sub = best[active]
        np.minimum(sub, cand, out=sub)
        best[active] = sub
        # the next offset contributes at least d + 2
        active = active[sub > d + 2]
    return best


def spread(p: Permutation) -> int:
    """Spread of ``p`` over all unordered position pairs."""
    return int(spread_batch_naive(p.as_array())[0])


def spread_with_witness(p: Permutation) -> tuple[int, tuple[int, int]]:
    """Spread of ``p`` and one pair ``(i, j)``, ``i < j``, attaining it."""
    arr = p.as_array()[None, :]
    n = p.n
    best, witness = None, None
    for d in range(1, n // 2 + 1):
        rowmin, where = _offset_min(arr, d)
        value = d + int(rowmin[0])
        if best is None or value < best:
            i = int(where[0])
            best, witness = value, tuple(sorted((i, (i + d) % n)))
    return best, witness


def spread_windowed(p: Permutation) -> int:
    """Same result as :func:`spread` in ``O(n * sqrt(n))`` work."""
    return int(spread_batch(p.as_array())[0])


def parse_permutation(text: str) -> Permutation:
    """Parse whitespace-separated integers; lines starting with ``#`` are skipped."""
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.lstrip().startswith("#"):
            continue
        for tok in line.split():
            try:
                values.append(int(tok, 10))
            except ValueError:
                raise PermutationError(
                    f"line {lineno}: {tok!r} is not an integer"
                ) from None
    return validate_permutation(values)


def format_permutation(p: Permutation, per_line: int = 16, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    m = p.mapping
    for k in range(0, p.n, per_line):
        lines.append(" ".join(str(v) for v in m[k:k + per_line]))
    return "\n".join(lines) + "\n"


def read_permutation(path) -> Permutation:
    with open(path, encoding="ascii") as fh:
        return parse_permutation(fh.read())


def write_permutation(p: Permutation, path, header: str | None = None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_permutation(p, header=header))
