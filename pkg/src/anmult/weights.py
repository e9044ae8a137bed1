"""Dominant weights of the rank-N algebras A_N = sl(N+1).

Weights live in the (N+1)-coordinate hyperplane with coordinates summing to
zero and the standard dot product; the Weyl group is the full symmetric group
permuting coordinates.  A dominant weight has two equivalent encodings:

* ``DynkinLabels``: the N nonnegative coefficients r_i on the fundamental
  dominant weights (length fixes the rank);
* an *orbit label*: a partition q with q_j = sum of r_i for i >= j.  Orbit
  labels are rank-free, which is what makes multiplicity tables portable
  across ranks.

The rho-shifted coordinate vector theta of a weight (consecutive differences
1 + r_i, coordinates summing to zero) drives both the Weyl dimension formula
and the shifted power sums used by the multiplicity identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .partitions import Partition, as_partition, grade, sub_dominants

OrbitLabel = Partition


class OrbitTooLargeError(ValueError):
    """Orbit enumeration guard exceeded."""


@dataclass(frozen=True)
class DynkinLabels:
    rank: int
    r: tuple[int, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if len(self.r) != self.rank:
            raise ValueError("label count must equal the rank")
        if any(x < 0 for x in self.r):
            raise ValueError("labels must be nonnegative")

    @classmethod
    def from_labels(cls, labels) -> "DynkinLabels":
        labels = tuple(int(x) for x in labels)
        return cls(len(labels), labels)


@dataclass
class MultiplicityTable:
    """Orbit multiplicities of one irreducible representation.

    ``entries`` maps sub-dominant orbit labels of ``top`` to nonnegative
    integers; the top label itself always carries multiplicity 1.  ``rank``
    records the rank the table was computed at, if any (labels themselves are
    rank-free).
    """

    top: OrbitLabel
    entries: dict[OrbitLabel, int] = field(default_factory=dict)
    rank: int | None = None

    def __post_init__(self):
        allowed = set(sub_dominants(self.top))
        for label, m in self.entries.items():
            if label not in allowed:
                raise ValueError(f"label {label} is not sub-dominant to {self.top}")
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
        if self.entries.get(self.top, 1) != 1:
            raise ValueError("top multiplicity must be 1")

    def multiplicity(self, label: OrbitLabel) -> int:
        return self.entries.get(label, 0)

    def in_grade_order(self) -> list[tuple[OrbitLabel, int]]:
        return sorted(self.entries.items(), key=lambda kv: grade(kv[0]))


def to_orbit_label(d: DynkinLabels) -> OrbitLabel:
    """Suffix sums of the Dynkin labels, truncated at the last nonzero."""
    q = []
    acc = 0
    for x in reversed(d.r):
        acc += x
        q.append(acc)
    q.reverse()
    while q and q[-1] == 0:
        q.pop()
    return tuple(q)


def to_dynkin(q: OrbitLabel, rank: int) -> DynkinLabels:
    q = as_partition(q) if q else ()
    if len(q) > rank:
        raise ValueError(f"rank too small: {len(q)} parts need rank >= {len(q)}")
    padded = list(q) + [0] * (rank + 1 - len(q))
    return DynkinLabels(rank, tuple(padded[i] - padded[i + 1] for i in range(rank)))


def height(q: OrbitLabel) -> int:
    return sum(q)


@lru_cache(maxsize=None)
def theta_vector(d: DynkinLabels) -> tuple[Fraction, ...]:
    """The rho-shifted coordinates: differences 1 + r_i, coordinates sum 0."""
    n1 = d.rank + 1
    drops = [0]
    for ri in d.r:
        drops.append(drops[-1] + 1 + ri)
    shift = Fraction(sum(drops), n1)
    return tuple(shift - drop for drop in drops)


@lru_cache(maxsize=None)
def theta_power(s: int, d: DynkinLabels) -> Fraction:
    """Power sum of the rho-shifted coordinates; identically 0 at s = 1."""
    if s < 1:
        raise ValueError("degree must be >= 1")
    return sum((t**s for t in theta_vector(d)), Fraction(0))


def orbit_dimension(q: OrbitLabel, rank: int) -> int:
    """Number of distinct permutations of q padded with zeros to N+1 slots."""
    n1 = rank + 1
    sigma = len(q)
    if sigma > n1:
        return 0
    dim = factorial(n1) // factorial(n1 - sigma)
    counts: dict[int, int] = {}
    for v in q:
        counts[v] = counts.get(v, 0) + 1
    for c in counts.values():
        dim //= factorial(c)
    return dim


def orbit_weights(q: OrbitLabel, rank: int) -> list[tuple[int, ...]]:
    """All weights of the Weyl orbit as padded (N+1)-vectors (small N only)."""
    n1 = rank + 1
    if len(q) > n1:
        raise ValueError(f"rank too small: {len(q)} parts need rank >= {len(q) - 1}")
    if orbit_dimension(q, rank) > 10**6:
        raise OrbitTooLargeError("orbit too large")
    values = sorted(set(q) | {0} if len(q) < n1 else set(q), reverse=True)
    counts = {v: 0 for v in values}
    for v in q:
        counts[v] += 1
    if len(q) < n1:
        counts[0] += n1 - len(q)
    out: list[tuple[int, ...]] = []
    vec: list[int] = []

    def place(remaining: int):
        if remaining == 0:
            out.append(tuple(vec))
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                vec.append(v)
                place(remaining - 1)
                vec.pop()
                counts[v] += 1

    place(n1)
    return out


def weyl_dimension(d: DynkinLabels) -> int:
    """Product over coordinate pairs of (theta_i - theta_j)/(j - i)."""
    theta = theta_vector(d)
    n1 = d.rank + 1
    num = Fraction(1)
    for i in range(n1):
        for j in range(i + 1, n1):
            num *= (theta[i] - theta[j]) / (j - i)
    assert num.denominator == 1 and num > 0
    return int(num)


def rep_dimension(t: MultiplicityTable, rank: int) -> int:
    """Multiplicity-weighted sum of orbit dimensions at the given rank."""
    return sum(m * orbit_dimension(label, rank) for label, m in t.entries.items())
