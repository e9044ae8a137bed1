"""Integer partitions, the grading order, dominance, and sub-dominant sets.

A partition is a tuple of weakly decreasing positive ints.  Partitions of s
carry a 1-based *grade*: their position in ascending lexicographic order,
which starts at the all-ones partition and ends at the single-part partition
(s).  Lexicographic order refines dominance, so any partition strictly
dominated by another has a strictly smaller grade.
"""

from __future__ import annotations

from functools import lru_cache

Partition = tuple[int, ...]


def as_partition(parts) -> Partition:
    p = tuple(int(x) for x in parts)
    if any(x <= 0 for x in p):
        raise ValueError(f"partition parts must be positive: {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"partition parts must be weakly decreasing: {p}")
    return p


def weight(p: Partition) -> int:
    return sum(p)


def parse_partition(text: str) -> Partition:
    """Parse the comma-separated text form, e.g. ``3,2,1,1,1,1``."""
    text = text.strip()
    if not text:
        return ()
    return as_partition(text.split(","))


def format_partition(p: Partition) -> str:
    return ",".join(str(x) for x in p)


def _descending(s: int, maxpart: int):
    if s == 0:
        yield ()
        return
    for first in range(min(s, maxpart), 0, -1):
        for rest in _descending(s - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(s: int) -> tuple[Partition, ...]:
    """All partitions of s exactly once, in grade order (ascending lex)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return tuple(sorted(_descending(s, s)))


@lru_cache(maxsize=None)
def _grade_index(s: int) -> dict[Partition, int]:
    return {p: i + 1 for i, p in enumerate(enumerate_partitions(s))}


_PCOUNT = [1]


def partition_count(s: int) -> int:
    """p(s) by the pentagonal-number recurrence."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    while len(_PCOUNT) <= s:
        n = len(_PCOUNT)
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = 1 if k % 2 else -1
            if g1 <= n:
                total += sign * _PCOUNT[n - g1]
            if g2 <= n:
                total += sign * _PCOUNT[n - g2]
            k += 1
        _PCOUNT.append(total)
    return _PCOUNT[s]


@lru_cache(maxsize=None)
def partitions_without_ones(s: int) -> tuple[Partition, ...]:
    """Partitions of s with no part equal to 1, in grade order."""
    return tuple(p for p in enumerate_partitions(s) if not p or p[-1] != 1)


def kappa(s: int) -> int:
    """Number of partitions of s with no part equal to 1."""
    return len(partitions_without_ones(s))


def dominates(a: Partition, b: Partition) -> bool:
    """Prefix-sum dominance on equal-weight partitions (zero padded)."""
    if weight(a) != weight(b):
        raise ValueError(f"weight mismatch: {a} vs {b}")
    pa = pb = 0
    for i in range(max(len(a), len(b))):
        pa += a[i] if i < len(a) else 0
        pb += b[i] if i < len(b) else 0
        if pa < pb:
            return False
    return True


def grade(p: Partition) -> int:
    """1-based position of p in the grading order of its weight."""
    return _grade_index(weight(p))[tuple(p)]


def sub_dominants(q: Partition) -> tuple[Partition, ...]:
    """All partitions of q's weight dominated by q, in ascending grade.

    q itself is the last element; the all-ones partition is the first.
    """
    return tuple(p for p in enumerate_partitions(weight(q)) if dominates(q, p))
