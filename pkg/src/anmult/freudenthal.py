"""Recursive multiplicity oracle (Freudenthal's formula).

The classical top-down recursion: for a weight w below the highest weight L,

    (|L + rho|^2 - |w + rho|^2) m(w) = 2 sum_{a > 0} sum_{t >= 1} m(w + t a) <w + t a, a>

with positive roots a = e_i - e_j (i < j).  All bookkeeping happens on the
unshifted integer coordinate vectors (partitions of the height padded with
zeros); shifting to the zero-sum hyperplane changes neither coordinate
differences nor the norm differences above, so everything stays in exact
integer arithmetic.  Non-dominant arguments reduce to their orbit label by
sorting coordinates.

Used as the independent reference for calibration and cross-checking of the
linear-system solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .partitions import Partition, sub_dominants
from .weights import (DynkinLabels, MultiplicityTable, OrbitLabel,
                      rep_dimension, to_dynkin, to_orbit_label, weyl_dimension)

DIMENSION_GUARD = 10**7


def freudenthal(d: DynkinLabels) -> MultiplicityTable:
    """Multiplicity of every sub-dominant orbit of the representation d."""
    if weyl_dimension(d) > DIMENSION_GUARD:
        raise ValueError("representation too large for the recursion guard")
    rank = d.rank
    n1 = rank + 1
    top = to_orbit_label(d)
    if not top:
        return MultiplicityTable(top=(), entries={(): 1}, rank=rank)
    labels = [lab for lab in sub_dominants(top) if len(lab) <= n1]
    top_padded = top + (0,) * (n1 - len(top))
    delta = tuple(range(rank, -1, -1))

    def shifted_norm2(vec: tuple[int, ...]) -> int:
        return sum((v + dl) ** 2 for v, dl in zip(vec, delta))

    top_norm = shifted_norm2(top_padded)
    top_max = top[0]
    mult: dict[OrbitLabel, int] = {top: 1}
    # grade order is a linear extension of dominance, so walking down from
    # the top only ever references multiplicities already computed
    for lab in reversed(labels[:-1]):
        lam = list(lab) + [0] * (n1 - len(lab))
        denom = top_norm - shifted_norm2(tuple(lam))
        assert denom > 0, "recursion denominator must be positive below the top"
        total = 0
        for i in range(n1):
            for j in range(i + 1, n1):
                li, lj = lam[i], lam[j]
                t = 1
                while True:
                    vi, vj = li + t, lj - t
                    if vj < 0 or vi > top_max:
                        break
                    w = lam.copy()
                    w[i], w[j] = vi, vj
                    key = tuple(sorted((x for x in w if x), reverse=True))
                    m = mult.get(key)
                    if m:
                        total += m * (li - lj + 2 * t)
                    t += 1
        num = 2 * total
        assert num % denom == 0, "Freudenthal multiplicity must be integral"
        mult[lab] = num // denom
    ordered = {lab: mult[lab] for lab in labels}
    return MultiplicityTable(top=top, entries=ordered, rank=rank)


def check_dimension(t: MultiplicityTable, rank: int) -> bool:
    """Weyl dimension formula vs multiplicity-weighted orbit sizes."""
    return rep_dimension(t, rank) == weyl_dimension(to_dynkin(t.top, rank))


@dataclass(frozen=True)
class StabilityReport:
    top: OrbitLabel
    ranks: tuple[int, ...]
    # label -> multiplicity at each rank (None where the orbit is empty)
    values: dict[OrbitLabel, tuple[int | None, ...]]
    stable: bool

    def stable_values(self) -> dict[OrbitLabel, int]:
        return {lab: next(v for v in vs if v is not None)
                for lab, vs in self.values.items()}


def stability_report(q: OrbitLabel, ranks: list[int]) -> StabilityReport:
    """Run the recursion at several ranks and compare shared labels."""
    sigma = len(q)
    if any(n < sigma for n in ranks):
        raise ValueError("every rank must be >= the number of parts")
    tables = {n: freudenthal(to_dynkin(q, n)) for n in ranks}
    values: dict[OrbitLabel, tuple[int | None, ...]] = {}
    for lab in sub_dominants(q):
        row = tuple(tables[n].entries.get(lab) for n in ranks)
        if any(v is not None for v in row):
            values[lab] = row
    stable = all(len({v for v in row if v is not None}) == 1 for row in values.values())
    return StabilityReport(top=tuple(q), ranks=tuple(ranks), values=values, stable=stable)
