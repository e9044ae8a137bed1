"""Power-sum expansion of generalized Weyl-orbit characters.

The degree-s character of an orbit is the sum of s-th powers of its weights,
viewed as linear forms in N+1 independent variables.  Expanded over products
of power sums p_a = sum_I x_I^a, the coefficients are polynomials in the rank
variable N; the coefficient attached to the power-sum partition ``pi`` is the
``cof`` value consumed by the multiplicity identities.

Because the physical weight coordinates satisfy p_1 = 0, only coefficients on
partitions with no part 1 are observable.  The full formal expansion is kept
internally (it is the unique one over independent variables) and checked
against a literal brute-force expansion of small orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import ExactMatrix, PolyN, solve_linear_exact
from .partitions import Partition, enumerate_partitions
from .weights import (MultiplicityTable, OrbitLabel, OrbitTooLargeError,
                      orbit_dimension, orbit_weights)


@dataclass(frozen=True)
class PowerSumExpansion:
    """Orbit character of one degree as N-dependent power-sum coefficients."""

    degree: int
    terms: dict[Partition, PolyN]

    def coefficient(self, pi: Partition) -> PolyN:
        return self.terms.get(tuple(pi), PolyN())

    def evaluate(self, rank: int) -> dict[Partition, Fraction]:
        """Coefficients at a concrete rank, zero entries dropped."""
        out = {}
        for pi, poly in self.terms.items():
            v = poly(rank)
            if v:
                out[pi] = v
        return out


def _compositions(total: int, slots: int):
    """All tuples of `slots` nonnegative ints summing to `total`."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _aug_to_power_sums(eta: Partition) -> tuple[tuple[Partition, int], ...]:
    """Expand the ordered-injective-placement sum of exponent multiset eta.

    Uses the merge recurrence: placing a fresh part a next to eta either
    occupies a new slot (power-sum factor p_a) or collides with an existing
    part, which it increments.
    """
    if not eta:
        return (((), 1),)
    a, rest = eta[0], eta[1:]
    acc: dict[Partition, int] = {}
    for pi, c in _aug_to_power_sums(rest):
        key = tuple(sorted(pi + (a,), reverse=True))
        acc[key] = acc.get(key, 0) + c
    for i in range(len(rest)):
        merged = tuple(sorted(rest[:i] + (rest[i] + a,) + rest[i + 1 :], reverse=True))
        for pi, c in _aug_to_power_sums(merged):
            acc[pi] = acc.get(pi, 0) - c
    return tuple(sorted((k, v) for k, v in acc.items() if v))


def _multinomial(s: int, e: tuple[int, ...]) -> int:
    out = factorial(s)
    for x in e:
        out //= factorial(x)
    return out


@lru_cache(maxsize=None)
def _zero_slot_poly(r: int, k: int) -> PolyN:
    """(N+1-r)(N-r)...(N+2-k): injective placements of the k-r zero-exponent parts."""
    out = PolyN((1,))
    var = PolyN.variable()
    for t in range(k - r):
        out = out * (var + (1 - r - t))
    return out


@lru_cache(maxsize=None)
def orbit_character_expansion(q: OrbitLabel, s: int) -> PowerSumExpansion:
    """Formal power-sum expansion of the degree-s character of orbit q.

    Sums over exponent assignments of s onto the parts of q, grouped by the
    multiset of nonzero exponents; the parts with zero exponent contribute the
    falling-factorial polynomial in N counting their injective placements, and
    repeated part values are divided out once at the end.
    """
    if s < 1:
        raise ValueError("degree must be >= 1")
    if not q:
        raise ValueError("orbit label must be nonempty")
    k = len(q)
    by_eta: dict[Partition, int] = {}
    for e in _compositions(s, k):
        coef = _multinomial(s, e)
        for qj, ej in zip(q, e):
            if ej:
                coef *= qj**ej
        eta = tuple(sorted((x for x in e if x > 0), reverse=True))
        by_eta[eta] = by_eta.get(eta, 0) + coef
    acc: dict[Partition, PolyN] = {}
    for eta, w in by_eta.items():
        ff = _zero_slot_poly(len(eta), k)
        for pi, c in _aug_to_power_sums(eta):
            term = ff * (w * c)
            prev = acc.get(pi)
            acc[pi] = term if prev is None else prev + term
    repeat = 1
    counts: dict[int, int] = {}
    for v in q:
        counts[v] = counts.get(v, 0) + 1
    for c in counts.values():
        repeat *= factorial(c)
    inv = Fraction(1, repeat)
    terms = {pi: poly * inv for pi, poly in acc.items() if not poly.is_zero}
    return PowerSumExpansion(degree=s, terms=terms)


def cof(q: OrbitLabel, idx: Partition, rank: int) -> Fraction:
    """Power-sum coefficient of the orbit character, evaluated at a rank.

    Only partitions without a part 1 are physically meaningful (the weight
    coordinates sum to zero), so others are rejected.
    """
    idx = tuple(idx)
    if idx and idx[-1] == 1:
        raise ValueError("coefficient not physical: index partition contains 1")
    return orbit_character_expansion(q, sum(idx)).coefficient(idx)(rank)


def physical_cof(q: OrbitLabel, idx: Partition, rank: int) -> Fraction:
    """Like cof, but 0 for labels whose orbit is empty at this rank."""
    if len(q) > rank + 1:
        return Fraction(0)
    return cof(q, idx, rank)


def rep_cof(t: MultiplicityTable, idx: Partition, rank: int) -> Fraction:
    """Multiplicity-weighted cof of a representation; empty orbits contribute 0."""
    total = Fraction(0)
    for label, m in t.entries.items():
        if m and label:
            total += m * physical_cof(label, idx, rank)
    return total


# ---------------------------------------------------------------------------
# brute-force oracle: literal monomial expansion of small orbits
# ---------------------------------------------------------------------------


def _weight_power_monomials(w: tuple[int, ...], s: int) -> dict[tuple[int, ...], int]:
    """(w . x)^s as full monomial exponent vectors over the padded slots."""
    support = [i for i, wi in enumerate(w) if wi]
    out: dict[tuple[int, ...], int] = {}
    for e in _compositions(s, len(support)):
        coef = _multinomial(s, e)
        for wi, ei in zip((w[i] for i in support), e):
            coef *= wi**ei
        exp = [0] * len(w)
        for i, ei in zip(support, e):
            exp[i] = ei
        key = tuple(exp)
        out[key] = out.get(key, 0) + coef
    return out


def orbit_monomials(q: OrbitLabel, s: int, rank: int) -> dict[tuple[int, ...], int]:
    """Sum of (w . x)^s over the whole orbit, as a monomial dictionary."""
    total: dict[tuple[int, ...], int] = {}
    for w in orbit_weights(q, rank):
        for exp, c in _weight_power_monomials(w, s).items():
            total[exp] = total.get(exp, 0) + c
    return {k: v for k, v in total.items() if v}


def power_product_monomials(pi: Partition, rank: int) -> dict[tuple[int, ...], int]:
    """Monomial expansion of the power-sum product attached to partition pi."""
    n1 = rank + 1
    out: dict[tuple[int, ...], int] = {(0,) * n1: 1}
    for a in pi:
        nxt: dict[tuple[int, ...], int] = {}
        for exp, c in out.items():
            for i in range(n1):
                key = exp[:i] + (exp[i] + a,) + exp[i + 1 :]
                nxt[key] = nxt.get(key, 0) + c
        out = nxt
    return out


def _monomial_shapes(mono: dict[tuple[int, ...], int | Fraction]) -> dict[Partition, Fraction]:
    """Collapse a symmetric monomial dict to one coefficient per exponent shape."""
    shapes: dict[Partition, Fraction] = {}
    for exp, c in mono.items():
        shape = tuple(sorted((x for x in exp if x), reverse=True))
        prev = shapes.get(shape)
        if prev is None:
            shapes[shape] = Fraction(c)
        elif prev != c:
            raise ValueError("monomial dictionary is not symmetric")
    return shapes


def rank_basis(s: int, rank: int) -> tuple[Partition, ...]:
    """Power-sum partitions of s with parts <= N+1: a basis at this rank."""
    return tuple(pi for pi in enumerate_partitions(s) if not pi or pi[0] <= rank + 1)


def decompose_monomials(mono: dict[tuple[int, ...], int | Fraction], s: int,
                        rank: int) -> dict[Partition, Fraction]:
    """Exact decomposition of a symmetric degree-s polynomial over the rank basis."""
    basis = rank_basis(s, rank)
    basis_shapes = [_monomial_shapes(power_product_monomials(pi, rank)) for pi in basis]
    target = _monomial_shapes(mono)
    shapes = sorted(set(target).union(*basis_shapes))
    rows = [[bs.get(sh, Fraction(0)) for bs in basis_shapes] for sh in shapes]
    rhs = [target.get(sh, Fraction(0)) for sh in shapes]
    sol, _, _ = solve_linear_exact(ExactMatrix.from_rows(rows), rhs)
    return {pi: c for pi, c in zip(basis, sol) if c}


def brute_force_expansion(q: OrbitLabel, s: int, rank: int) -> dict[Partition, Fraction]:
    """Independent oracle: expand the orbit literally and decompose exactly.

    The result is expressed over the rank basis (power-sum partitions with
    parts <= N+1), in which the decomposition is unique.  For N+1 >= s that
    basis contains every partition of s, so the result is directly comparable
    with the symbolic expansion evaluated at N.
    """
    if s > 8:
        raise ValueError("degree guard exceeded")
    if orbit_dimension(q, rank) > 10**5:
        raise OrbitTooLargeError("orbit too large")
    return decompose_monomials(orbit_monomials(q, s, rank), s, rank)


def reduce_expansion(expansion_at_rank: dict[Partition, Fraction], s: int,
                     rank: int) -> dict[Partition, Fraction]:
    """Rewrite an evaluated expansion over the rank basis.

    Below N+1 = s the power-sum products of degree s are linearly dependent,
    so comparing two expansions coefficient-wise is only meaningful after
    both are reduced to the same basis.
    """
    mono: dict[tuple[int, ...], Fraction] = {}
    for pi, c in expansion_at_rank.items():
        for exp, m in power_product_monomials(pi, rank).items():
            mono[exp] = mono.get(exp, Fraction(0)) + c * m
    mono = {k: v for k, v in mono.items() if v}
    return decompose_monomials(mono, s, rank)
