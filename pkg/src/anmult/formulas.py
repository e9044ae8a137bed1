"""Built-in multiplicity identities of degrees 4..7.

Each identity states that a specific linear combination vanishes on the true
multiplicities of any irreducible representation:

    rep_cof(id) * cof_factor(N)
      + dim(R) * ( sum of dim_terms(N) + sum of theta_terms(N) * Theta products )
      = 0

where the Theta products are taken at the highest weight.  Twelve identities
are shipped, one per no-1 partition of degrees 4..7; their coefficient
polynomials are transcribed tables, while five rank-dependent scale factors
(g, g4, g5, g6, g22) are left symbolic and fixed by calibration against the
recursive oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import physical_cof, rep_cof
from .exact import PolyN, RatFuncN
from .partitions import Partition, sub_dominants
from .weights import (DynkinLabels, MultiplicityTable, orbit_dimension,
                      rep_dimension, theta_power, to_dynkin)

GSYMBOLS = ("g", "g4", "g5", "g6", "g22")

_N = PolyN.variable()
_ONE = PolyN((1,))


@dataclass(frozen=True)
class FormulaSpec:
    """One transcribed multiplicity identity.

    ``theta_terms`` entries are (integer coefficient, polynomial factor,
    optional scale-factor symbol, multiset of Theta degrees).
    """

    id: Partition
    cof_const: int
    cof_poly: PolyN
    cof_sym: str | None
    dim_terms: tuple[tuple[PolyN, str | None], ...]
    theta_terms: tuple[tuple[int, PolyN, str | None, Partition], ...]

    def __post_init__(self):
        assert self.id and self.id[-1] >= 2, "identity index must have no part 1"
        for sym in self.symbols():
            assert sym in GSYMBOLS
        d = sum(self.id)
        for _, _, _, degs in self.theta_terms:
            assert degs and min(degs) >= 2
            assert sum(degs) <= d and (d - sum(degs)) % 2 == 0

    def symbols(self) -> set[str]:
        syms = set()
        if self.cof_sym:
            syms.add(self.cof_sym)
        syms.update(s for _, s in self.dim_terms if s)
        syms.update(s for _, _, s, _ in self.theta_terms if s)
        return syms

    @property
    def degree(self) -> int:
        return sum(self.id)


def format_formula_id(p: Partition) -> str:
    if p and max(p) > 9:
        return ",".join(str(x) for x in p)
    return "".join(str(x) for x in p)


def parse_formula_id(text: str) -> Partition:
    text = text.strip()
    if "," in text:
        parts = tuple(int(x) for x in text.split(","))
    else:
        parts = tuple(int(c) for c in text)
    if not parts or any(x < 2 for x in parts) or list(parts) != sorted(parts, reverse=True):
        raise ValueError(f"bad formula id: {text!r}")
    return parts


def builtin_formulas() -> tuple[FormulaSpec, ...]:
    """The twelve transcribed identities, in fixed enumeration order."""
    return _BUILTIN


def builtin_formula(id: Partition) -> FormulaSpec:
    for spec in _BUILTIN:
        if spec.id == tuple(id):
            return spec
    raise KeyError(f"no built-in identity {id}")


_BUILTIN = (
    FormulaSpec(
        id=(7,),
        cof_const=1, cof_poly=_ONE, cof_sym="g",
        dim_terms=(),
        theta_terms=(
            (-720, _N**6 + 6*_N**5 + 50*_N**4 + 160*_N**3 + 309*_N**2 + 314*_N + 120, None, (7,)),
            (5040, _N**5 + 5*_N**4 + 21*_N**3 + 43*_N**2 - 70*_N - 96, None, (5, 2)),
            (5040, _N**5 + 5*_N**4 + 9*_N**3 + 7*_N**2 + 62*_N + 60, None, (4, 3)),
            (-10080, 2*_N**4 + 8*_N**3 - 5*_N**2 - 26*_N - 15, None, (3, 2, 2)),
        ),
    ),
    FormulaSpec(
        id=(5, 2),
        cof_const=1, cof_poly=_N * (_N + 2), cof_sym="g",
        dim_terms=(),
        theta_terms=(
            (5040, _N**7 + 7*_N**6 + 31*_N**5 + 85*_N**4 + 16*_N**3 - 236*_N**2 - 192*_N, None, (7,)),
            (-504, _N**8 + 8*_N**7 + 32*_N**6 + 80*_N**5 + 515*_N**4 + 1676*_N**3 + 1648*_N**2 + 72*_N - 10080, None, (5, 2)),
            (-5040, 6*_N**6 + 36*_N**5 - _N**2 + 13*_N**4 - 188*_N**3 + 470*_N + 840, None, (4, 3)),
            (2520, _N**7 + 7*_N**6 - 70*_N**4 + 217*_N**3 + 987*_N**2 - 134*_N - 840, None, (3, 2, 2)),
            (42, _N**11 + 11*_N**10 - 2*_N**9 - 348*_N**8 - 1071*_N**7 + 231*_N**6 + 10856*_N**5
                 + 35458*_N**4 + 52712*_N**3 + 37224*_N**2 + 10080*_N, None, (5,)),
            (-210, _N**10 + 10*_N**9 - 19*_N**8 - 392*_N**7 - 497*_N**6 + 3178*_N**5
                   + 9183*_N**4 + 6948*_N**3 - 604*_N**2 - 1680*_N, None, (3, 2)),
        ),
    ),
    FormulaSpec(
        id=(4, 3),
        cof_const=12, cof_poly=_N * (_N + 2), cof_sym="g",
        dim_terms=(),
        theta_terms=(
            (60480, _N**7 + 7*_N**6 + 19*_N**5 + 25*_N**4 + 76*_N**3 + 184*_N**2 + 120*_N, None, (7,)),
            (-60480, 6*_N**6 + 36*_N**5 + 13*_N**4 - 188*_N**3 - _N**2 + 470*_N + 840, None, (5, 2)),
            (-5040, _N**8 + 8*_N**7 + 16*_N**6 - 16*_N**5 + 681*_N**4 + 2980*_N**3 - 986*_N**2 - 8060*_N - 8400, None, (4, 3)),
            (5040, 2*_N**7 + 14*_N**6 + 133*_N**5 + 525*_N**4 - 553*_N**3 - 3647*_N**2 + 1510*_N + 4200, None, (3, 2, 2)),
            (-7, (_N - 5) * (_N - 4) * (_N - 3) * (_N - 2) * _N * (_N + 1)**3 * (_N + 2)
                 * (_N + 4) * (_N + 5) * (_N + 6) * (_N + 7), None, (3,)),
        ),
    ),
    FormulaSpec(
        id=(3, 2, 2),
        cof_const=24, cof_poly=_N * (_N + 2), cof_sym="g",
        dim_terms=(),
        theta_terms=(
            (-241920, 2*_N**6 + 12*_N**5 + 11*_N**4 - 36*_N**3 - 67*_N**2 - 30*_N, None, (7,)),
            (60480, _N**7 + 7*_N**6 - 70*_N**4 + 217*_N**3 + 987*_N**2 - 134*_N - 840, None, (5, 2)),
            (10080, 2*_N**7 + 14*_N**6 + 133*_N**5 + 525*_N**4 - 553*_N**3 - 3647*_N**2 + 1510*_N + 4200, None, (4, 3)),
            (-5040, _N**8 + 8*_N**7 - 3*_N**6 - 130*_N**5 + 109*_N**4 + 1452*_N**3 + 5113*_N**2 + 6890*_N - 4200, None, (3, 2, 2)),
            (-5040, (_N - 5) * (_N - 4) * _N * (_N + 1)**2 * (_N + 2) * (_N + 6) * (_N + 7)
                    * (_N**2 + 2*_N - 1), None, (5,)),
            (-840, -(_N - 4) * (_N - 5) * _N * (_N + 1) * (_N + 2) * (_N + 6) * (_N + 7)
                   * (_N**4 + 4*_N**3 + 6*_N**2 + 4*_N + 25), None, (3, 2)),
            (-7, (_N - 5) * (_N - 4) * _N * (_N + 1) * (_N + 2) * (_N + 6) * (_N + 7)
                 * (5*_N**7 + 35*_N**6 - 14*_N**5 - 420*_N**4 - 445*_N**3 + 625*_N**2 + 2014*_N + 1320), None, (3,)),
        ),
    ),
    # the undefined scale factor in this identity's dimension term is written
    # with the same letter as the degree-7 one in the source tables, but the
    # joint two-unknown fit resolves it to the degree-6 factor g6; calibration
    # re-verifies that reading on every run (see engine provenance)
    FormulaSpec(
        id=(6,),
        cof_const=252, cof_poly=_ONE, cof_sym="g6",
        dim_terms=(((_N + 1), "g6"),),
        theta_terms=(
            (-30240, _N**5 + 5*_N**4 + 25*_N**3 + 55*_N**2 + 58*_N + 24, None, (6,)),
            (181440, _N**4 + 4*_N**3 + 7*_N**2 + 6*_N - 18, None, (4, 2)),
            (30240, 3*_N**4 + 12*_N**3 + 7*_N**2 - 10*_N + 72, None, (3, 3)),
            (-211680, _N**3 + 3*_N**2 - 4*_N - 6, None, (2, 2, 2)),
        ),
    ),
    FormulaSpec(
        id=(4, 2),
        cof_const=672, cof_poly=_N * (_N + 1) * (_N + 2), cof_sym="g6",
        dim_terms=((_N * (_N + 1) * (_N + 2) * (7*_N**2 + 14*_N + 47), "g6"),),
        theta_terms=(
            (483840, _N**7 + 7*_N**6 + 21*_N**5 + 35*_N**4 + 14*_N**3 - 42*_N**2 - 36*_N, None, (6,)),
            (-60480, _N**8 + 8*_N**7 + 28*_N**6 + 56*_N**5 + 169*_N**4 + 452*_N**3 + 762*_N**2 + 684*_N - 2160, None, (4, 2)),
            (-1209600, _N**6 + 6*_N**5 + 5*_N**4 - 20*_N**3 - 20*_N**2 + 16*_N + 96, None, (3, 3)),
            (60480, 2*_N**7 + 14*_N**6 - 3*_N**5 - 155*_N**4 + 163*_N**3 + 1221*_N**2 - 162*_N - 1080, None, (2, 2, 2)),
            (5040, _N**11 + 11*_N**10 + 14*_N**9 - 204*_N**8 - 747*_N**7 - 189*_N**6 + 3716*_N**5
                   + 9334*_N**4 + 10696*_N**3 + 6168*_N**2 + 1440*_N, None, (4,)),
            (-5040, 2*_N**10 + 20*_N**9 + 3*_N**8 - 456*_N**7 - 1008*_N**6 + 1680*_N**5
                    + 7327*_N**4 + 7036*_N**3 + 1236*_N**2 - 720*_N, None, (2, 2)),
            (-84, (_N + 1)**2, "g6", (2,)),
        ),
    ),
    FormulaSpec(
        id=(3, 3),
        cof_const=126, cof_poly=_N * (_N + 1) * (_N + 2), cof_sym="g6",
        dim_terms=((-5 * _N * (_N + 1) * (_N + 2), "g6"),),
        theta_terms=(
            (15120, 3*_N**7 + 21*_N**6 + 49*_N**5 + 35*_N**4 + 56*_N**3 + 196*_N**2 + 144*_N, None, (6,)),
            (-226800, _N**6 + 6*_N**5 + 5*_N**4 - 20*_N**3 - 20*_N**2 + 16*_N + 96, None, (4, 2)),
            (-5040, _N**8 + 8*_N**7 - 112*_N**5 + 127*_N**4 + 1404*_N**3 + 580*_N**2 - 2032*_N - 3840, None, (3, 3)),
            (60480, 4*_N**5 + 20*_N**4 - 19*_N**3 - 137*_N**2 + 78*_N + 180, None, (2, 2, 2)),
        ),
    ),
    FormulaSpec(
        id=(2, 2, 2),
        cof_const=576, cof_poly=_N * (_N + 1) * (_N + 2), cof_sym="g6",
        dim_terms=((_N * (_N + 1)**2 * (_N + 2) * (5*_N**2 + 10*_N + 23), "g6"),),
        theta_terms=(
            (483840, _N**6 + 6*_N**5 + 7*_N**4 - 12*_N**3 - 26*_N**2 - 12*_N, None, (6,)),
            (-51840, 2*_N**7 + 14*_N**6 - 3*_N**5 - 155*_N**4 + 163*_N**3 + 1221*_N**2 - 162*_N - 1080, None, (4, 2)),
            (-276480, 4*_N**5 + 20*_N**4 - 19*_N**3 - 137*_N**2 + 78*_N + 180, None, (3, 3)),
            (8640, _N**8 + 8*_N**7 - 7*_N**6 - 154*_N**5 - 79*_N**4 + 860*_N**3 + 1777*_N**2 + 1338*_N - 3240, None, (2, 2, 2)),
            (4320, 2*_N**10 + 20*_N**9 + 3*_N**8 - 456*_N**7 - 1008*_N**6 + 1680*_N**5
                   + 7327*_N**4 + 7036*_N**3 + 1236*_N**2 - 720*_N, None, (4,)),
            (-2160, _N**11 + 11*_N**10 + 7*_N**9 - 267*_N**8 - 687*_N**7 + 1407*_N**6 + 5543*_N**5
                    + 157*_N**4 - 6664*_N**3 + 6252*_N**2 + 9360*_N, None, (2, 2)),
            (36, 5*_N**14 + 70*_N**13 + 186*_N**12 - 1408*_N**11 - 7964*_N**10 - 1320*_N**9
                 + 65098*_N**8 + 121616*_N**7 - 67617*_N**6 - 437030*_N**5 - 422284*_N**4
                 + 127992*_N**3 + 432576*_N**2 + 190080*_N, None, (2,)),
        ),
    ),
    FormulaSpec(
        id=(5,),
        cof_const=1, cof_poly=_ONE, cof_sym="g5",
        dim_terms=(),
        theta_terms=(
            (-24, _N**4 + 4*_N**3 + 11*_N**2 + 14*_N + 6, None, (5,)),
            (120, _N**3 + 3*_N**2 + _N - 1, None, (3, 2)),
        ),
    ),
    FormulaSpec(
        id=(3, 2),
        cof_const=3, cof_poly=_ONE, cof_sym="g5",
        dim_terms=(),
        theta_terms=(
            (360, _N**3 + 3*_N**2 + _N - 1, None, (5,)),
            (-60, _N**4 + 4*_N**3 + 6*_N**2 + 4*_N + 25, None, (3, 2)),
            (5, (_N - 3) * (_N - 2) * (_N + 1)**3 * (_N + 4) * (_N + 5), None, (3,)),
        ),
    ),
    FormulaSpec(
        id=(4,),
        cof_const=-120, cof_poly=_ONE, cof_sym="g4",
        dim_terms=(((_N + 1), "g4"),),
        theta_terms=(
            (720, _N**3 + 3*_N**2 + 4*_N + 2, None, (4,)),
            (-720, 2*_N**2 + 4*_N - 1, None, (2, 2)),
        ),
    ),
    FormulaSpec(
        id=(2, 2),
        cof_const=240, cof_poly=(_N + 1), cof_sym="g4",
        dim_terms=((-(_N + 1), "g22"),),
        theta_terms=(
            (1440, 2*_N**3 + 6*_N**2 + 3*_N - 1, None, (4,)),
            (-720, _N**4 + 4*_N**3 - 8*_N + 13, None, (2, 2)),
            (120, _N**7 + 7*_N**6 + 8*_N**5 - 30*_N**4 - 59*_N**3 - _N**2 + 50*_N + 24, None, (2,)),
        ),
    ),
)


class CalibrationValues:
    """Resolved scale factors: symbol name -> rational function of N."""

    def __init__(self, values: dict[str, RatFuncN]):
        unknown = set(values) - set(GSYMBOLS)
        if unknown:
            raise ValueError(f"unknown symbols: {unknown}")
        self.values = dict(values)

    def value(self, sym: str, rank: int) -> Fraction:
        if sym not in self.values:
            raise KeyError(f"scale factor {sym!r} is not calibrated")
        return self.values[sym](rank)


def theta_block(spec: FormulaSpec, d: DynkinLabels, rank: int,
                cal: CalibrationValues) -> Fraction:
    """Sum of the Theta terms of one identity at a concrete weight and rank."""
    total = Fraction(0)
    for coeff, poly, sym, degs in spec.theta_terms:
        term = coeff * poly(rank)
        if sym is not None:
            term *= cal.value(sym, rank)
        for deg in degs:
            term *= theta_power(deg, d)
        total += term
    return total


def dim_block(spec: FormulaSpec, rank: int, cal: CalibrationValues) -> Fraction:
    total = Fraction(0)
    for poly, sym in spec.dim_terms:
        term = poly(rank)
        if sym is not None:
            term *= cal.value(sym, rank)
        total += term
    return total


def cof_factor(spec: FormulaSpec, rank: int, cal: CalibrationValues) -> Fraction:
    term = spec.cof_const * spec.cof_poly(rank)
    if spec.cof_sym is not None:
        term *= cal.value(spec.cof_sym, rank)
    return term


def phi_residual(spec: FormulaSpec, cal: CalibrationValues,
                 hypothesis: MultiplicityTable, rank: int) -> Fraction:
    """The identity's left-hand side on a hypothesised multiplicity table.

    Exactly zero when the table holds the true multiplicities and the
    identity (with its calibrated scale factors) is valid at this rank.
    """
    top_d = to_dynkin(hypothesis.top, rank)
    per_dim = dim_block(spec, rank, cal) + theta_block(spec, top_d, rank, cal)
    return (rep_cof(hypothesis, spec.id, rank) * cof_factor(spec, rank, cal)
            + rep_dimension(hypothesis, rank) * per_dim)


def formula_row(spec: FormulaSpec, top: Partition, rank: int,
                cal: CalibrationValues) -> dict[Partition, Fraction]:
    """Coefficient of each sub-dominant label's multiplicity in the identity."""
    top_d = to_dynkin(top, rank)
    per_dim = dim_block(spec, rank, cal) + theta_block(spec, top_d, rank, cal)
    cf = cof_factor(spec, rank, cal)
    row = {}
    for label in sub_dominants(top):
        row[label] = (physical_cof(label, spec.id, rank) * cf
                      + orbit_dimension(label, rank) * per_dim)
    return row
