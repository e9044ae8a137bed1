"""Calibration, validation, solving, and derivation of multiplicity identities.

Ties together the transcribed identity tables, the recursive oracle, and the
exact linear algebra:

* ``calibrate`` fits every identity's unknown scale factors from oracle
  multiplicity tables, forms per-symbol consensus values, reconstructs them as
  rational functions of the rank, and flags identities whose fits disagree;
* ``validate_formula`` re-checks residuals on a (typically disjoint) corpus;
* ``solve_multiplicities`` assembles identities at several ranks into an
  exact linear system for the unknown multiplicities;
* ``derive_formula`` fits brand-new identities of any degree from data alone,
  realizing the "one identity per no-1 partition" family beyond degree 7.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import physical_cof, rep_cof
from .exact import (ExactMatrix, InconsistentSystemError, PolyN, PoleError,
                    RatFuncN, ReconstructionError, UnderdeterminedSystemError,
                    poly_interpolate, ratfunc_reconstruct, solve_linear_exact)
from .formulas import (GSYMBOLS, CalibrationValues, FormulaSpec,
                       builtin_formulas, format_formula_id, phi_residual,
                       formula_row)
from .freudenthal import check_dimension, freudenthal
from .partitions import (Partition, enumerate_partitions, grade,
                         partitions_without_ones, sub_dominants)
from .weights import (MultiplicityTable, orbit_dimension, rep_dimension,
                      theta_power, to_dynkin, weyl_dimension)


class CalibrationError(ValueError):
    pass


class DerivationError(ValueError):
    pass


class SolveError(ValueError):
    pass


CorpusRep = tuple[Partition, MultiplicityTable]


def oracle_corpus(max_height: int, min_height: int = 1) -> list[CorpusRep]:
    """Oracle-verified multiplicity tables for every top weight in a height band.

    Tables are computed at rank = height, where every sub-dominant orbit is
    nonempty, so each table carries the full (rank-free) label set.
    """
    corpus: list[CorpusRep] = []
    for h in range(min_height, max_height + 1):
        for top in enumerate_partitions(h):
            table = freudenthal(to_dynkin(top, h))
            if not check_dimension(table, h):
                raise CalibrationError(f"oracle table for {top} fails the dimension check")
            corpus.append((top, table))
    return corpus


def _symbol_equation(spec: FormulaSpec, top: Partition, table: MultiplicityTable,
                     rank: int) -> tuple[dict[str, Fraction], Fraction]:
    """The identity at one (rep, rank), linear in the unknown scale factors."""
    rc = rep_cof(table, spec.id, rank)
    dim = rep_dimension(table, rank)
    d = to_dynkin(top, rank)
    coeffs: dict[str, Fraction] = {}
    const = Fraction(0)

    def put(sym, value):
        nonlocal const
        if sym is None:
            const += value
        else:
            coeffs[sym] = coeffs.get(sym, Fraction(0)) + value

    put(spec.cof_sym, rc * spec.cof_const * spec.cof_poly(rank))
    for poly, sym in spec.dim_terms:
        put(sym, dim * poly(rank))
    for coeff, poly, sym, degs in spec.theta_terms:
        v = dim * coeff * poly(rank)
        for deg in degs:
            v *= theta_power(deg, d)
        put(sym, v)
    return coeffs, const


def _fit_spec_at_rank(spec: FormulaSpec, corpus: list[CorpusRep],
                      rank: int) -> dict[str, Fraction] | str:
    """Solve one identity's own scale factors at one rank.

    Returns the fitted symbol values, or a diagnostic string when the
    identity's equations are mutually inconsistent or underdetermined there.
    """
    syms = sorted(spec.symbols())
    rows, rhs = [], []
    for top, table in corpus:
        if rank <= len(top):
            continue
        coeffs, const = _symbol_equation(spec, top, table, rank)
        if not coeffs and const == 0:
            continue
        if not coeffs:
            return f"unsatisfiable at N={rank} on {top} (residual {const})"
        rows.append([coeffs.get(s, Fraction(0)) for s in syms])
        rhs.append(-const)
    if not rows:
        return f"no usable equations at N={rank}"
    try:
        sol, _, _ = solve_linear_exact(ExactMatrix.from_rows(rows), rhs)
    except InconsistentSystemError:
        return f"equations mutually inconsistent at N={rank}"
    except UnderdeterminedSystemError:
        return f"corpus too small for full rank at N={rank}"
    return dict(zip(syms, sol))


def _newton_fit(pts: list[tuple[int, Fraction]]) -> PolyN | None:
    """Polynomial through all points if one of degree <= len-3 exists.

    Newton divided differences: the function is a polynomial of degree d
    exactly when every difference beyond order d vanishes; at least two
    vanishing tail coefficients are required as generalization evidence.
    """
    xs = [Fraction(x) for x, _ in pts]
    coef = [Fraction(y) for _, y in pts]
    n = len(pts)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    deg = max((i for i, c in enumerate(coef) if c), default=-1)
    if n - 1 - deg < 2:
        return None
    poly = PolyN()
    var = PolyN.variable()
    for i in range(deg, -1, -1):
        poly = poly * (var - xs[i]) + coef[i]
    return poly


def product_hints(degree: int) -> tuple[PolyN, ...]:
    """Denominator multiples expected for identity coefficients, small first.

    The calibrated scale factor of a degree-d identity family is the product
    of the 2d-1 consecutive linear factors centred on N+1; coefficient
    denominators observed across the identity family divide that product
    times small products of linear factors near the origin (the cof-factor
    and power-sum denominators), which the wider hints cover.
    """
    var = PolyN.variable()
    base = PolyN((1,))
    for k in range(-(degree - 2), degree + 1):
        base = base * (var + k)
    near = PolyN((1,))
    for k in range(-3, 6):
        near = near * (var + k)
    return (base,
            base * var * (var + 1) ** 3 * (var + 2),
            base * near * (var + 1) ** 2)


def reconstruct_rankwise(points: list[tuple[int, Fraction]],
                         hints: tuple[PolyN, ...] = ()) -> RatFuncN:
    """Minimal polynomial or rational function through exact per-rank values.

    Tries a direct polynomial fit, then polynomial fits of the values scaled
    by each hint denominator (overshooting hints reduce away), then one
    maximal balanced rational fit.  Every candidate must reproduce all
    samples exactly; at least two samples always stay held out of the fit.
    """
    pts = sorted(points)
    if len(pts) < 4:
        raise CalibrationError("insufficient ranks for reconstruction")
    if all(y == 0 for _, y in pts):
        return RatFuncN(PolyN())
    for den in (PolyN((1,)),) + tuple(hints):
        scaled = [(x, y * den(x)) for x, y in pts]
        poly = _newton_fit(scaled)
        if poly is not None:
            cand = RatFuncN(poly, den)
            if all(cand(x) == y for x, y in pts):
                return cand
    bound = (len(pts) - 3) // 2
    if bound >= 1:
        try:
            cand = ratfunc_reconstruct(pts[: 2 * bound + 1], bound, bound)
            if all(cand.den(x) != 0 and cand(x) == y for x, y in pts):
                return cand
        except (ReconstructionError, ValueError):
            pass
    raise CalibrationError("insufficient ranks for reconstruction")


@dataclass
class Calibration:
    """Resolved scale factors plus per-identity fit/validation statuses."""

    values: dict[str, RatFuncN]
    status: dict[Partition, str]
    provenance: dict = field(default_factory=dict)

    def calibration_values(self) -> CalibrationValues:
        return CalibrationValues(self.values)

    def valid_formulas(self) -> list[FormulaSpec]:
        return [s for s in builtin_formulas() if self.status.get(s.id) == "valid"]

    def is_valid(self, id: Partition) -> bool:
        return self.status.get(tuple(id)) == "valid"

    # -- persistence ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        def poly_strings(p: PolyN) -> list[str]:
            return [str(c) for c in p.coeffs]

        return {
            "symbols": {name: {"num": poly_strings(rf.num), "den": poly_strings(rf.den)}
                        for name, rf in ((n, self.values[n]) for n in GSYMBOLS
                                         if n in self.values)},
            "status": {format_formula_id(spec.id): self.status.get(spec.id, "unknown")
                       for spec in builtin_formulas()},
            "provenance": self.provenance,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Calibration":
        from .formulas import parse_formula_id
        values = {name: RatFuncN(PolyN(Fraction(c) for c in entry["num"]),
                                 PolyN(Fraction(c) for c in entry["den"]))
                  for name, entry in data["symbols"].items()}
        status = {parse_formula_id(k): v for k, v in data["status"].items()}
        return cls(values=values, status=status, provenance=data.get("provenance", {}))

    def save(self, path: str) -> None:
        """Atomic write: temp file in the target directory, then rename."""
        payload = json.dumps(self.to_json_dict(), indent=2)
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str) -> "Calibration":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


# which identities vote on each shared scale factor
_VOTERS = {
    "g": ((7,), (5, 2), (4, 3), (3, 2, 2)),
    "g6": ((6,), (4, 2), (3, 3), (2, 2, 2)),
    "g5": ((5,), (3, 2)),
    "g4": ((4,), (2, 2)),
    "g22": ((2, 2),),
}


def calibrate(specs: list[FormulaSpec], corpus: list[CorpusRep],
              ranks: list[int]) -> Calibration:
    """Fit scale factors per identity and rank, then form per-symbol consensus.

    Identities whose own equations are inconsistent, or whose fitted value for
    a shared symbol disagrees with the majority of its voters, are marked
    suspect (with the first conflict recorded) and excluded from consensus.
    """
    if not corpus:
        raise CalibrationError("empty corpus")
    if not specs:
        raise CalibrationError("no identities to calibrate")
    fits: dict[Partition, dict[int, dict[str, Fraction]]] = {}
    status: dict[Partition, str] = {}
    for spec in specs:
        per_rank: dict[int, dict[str, Fraction]] = {}
        for n in ranks:
            res = _fit_spec_at_rank(spec, corpus, n)
            if isinstance(res, str):
                status.setdefault(spec.id, f"suspect: {res}")
                break
            per_rank[n] = res
        fits[spec.id] = per_rank

    spec_ids = {s.id for s in specs}
    consensus: dict[str, dict[int, Fraction]] = {}
    for sym, voters in _VOTERS.items():
        voters = [v for v in voters if v in spec_ids and v not in status]
        if not voters:
            continue
        per_rank: dict[int, Fraction] = {}
        for n in ranks:
            votes = {v: fits[v][n][sym] for v in voters
                     if n in fits[v] and sym in fits[v][n]}
            if not votes:
                continue
            counts: dict[Fraction, list[Partition]] = {}
            for v, val in votes.items():
                counts.setdefault(val, []).append(v)
            best = max(counts.values(), key=len)
            if 2 * len(best) <= len(votes) and len(counts) > 1:
                raise CalibrationError(
                    f"no majority for {sym} at N={n}: {sorted(counts.values(), key=len)}")
            value = next(val for val, who in counts.items() if who is best)
            per_rank[n] = value
            for val, who in counts.items():
                if val != value:
                    for v in who:
                        status.setdefault(
                            v, f"suspect: fitted {sym} at N={n} is {val}, "
                               f"consensus is {value}")
        if per_rank:
            consensus[sym] = per_rank

    values: dict[str, RatFuncN] = {}
    for sym, per_rank in consensus.items():
        values[sym] = reconstruct_rankwise(sorted(per_rank.items()))
    for spec in specs:
        for sym in spec.symbols():
            if spec.id not in status and sym not in values:
                raise CalibrationError(f"symbol {sym} could not be calibrated")
    for spec in specs:
        status.setdefault(spec.id, "valid")
    provenance = {
        "fit_corpus": [".".join(map(str, top)) or "0" for top, _ in corpus],
        "fit_ranks": list(ranks),
        "symbol_forms": {sym: repr(rf) for sym, rf in values.items()},
    }
    return Calibration(values=values, status=status, provenance=provenance)


@dataclass(frozen=True)
class FormulaValidation:
    formula_id: Partition
    kind: str
    valid: bool | None            # None: nothing to check (empty corpus)
    checks: int
    first_failure: tuple[Partition, int, Fraction] | None

    def describe(self) -> str:
        if self.valid is None:
            return "unknown (empty corpus)"
        if self.valid:
            return f"valid ({self.checks} residuals)"
        top, rank, res = self.first_failure
        return f"suspect: residual {res} on top {top} at N={rank}"


def _residual(formula, cal: CalibrationValues | None,
              table: MultiplicityTable, rank: int) -> Fraction:
    if isinstance(formula, FormulaSpec):
        if cal is None:
            raise SolveError("transcribed identities need a calibration")
        return phi_residual(formula, cal, table, rank)
    return formula.residual(table, rank)


def validate_formula(formula, cal: CalibrationValues | None,
                     corpus: list[CorpusRep], ranks: list[int]) -> FormulaValidation:
    """Residuals of one identity over a corpus; valid iff all are exactly 0."""
    kind = "builtin" if isinstance(formula, FormulaSpec) else "derived"
    checks = 0
    first_failure = None
    for top, table in corpus:
        for n in ranks:
            if n <= len(top):
                continue
            try:
                r = _residual(formula, cal, table, n)
            except PoleError:
                continue
            checks += 1
            if r != 0 and first_failure is None:
                first_failure = (top, n, r)
    if checks == 0:
        return FormulaValidation(formula.id, kind, None, 0, None)
    return FormulaValidation(formula.id, kind, first_failure is None, checks,
                             first_failure)


def calibrate_and_validate(fit_corpus: list[CorpusRep],
                           validation_corpus: list[CorpusRep],
                           fit_ranks: list[int],
                           validation_ranks: list[int]) -> Calibration:
    """Calibrate on one corpus, then re-validate every identity on another.

    An identity is ``valid`` only if it survives both stages; validation
    failures overwrite the fit-stage status with the localized residual.
    Also re-checks, and records, which identities share scale-factor values.
    """
    specs = list(builtin_formulas())
    cal = calibrate(specs, fit_corpus, fit_ranks)
    values = cal.calibration_values()
    for spec in specs:
        if cal.status[spec.id] != "valid":
            continue
        report = validate_formula(spec, values, validation_corpus, validation_ranks)
        if report.valid is False:
            cal.status[spec.id] = report.describe()
    cal.provenance["validation_corpus"] = [".".join(map(str, top)) or "0"
                                           for top, _ in validation_corpus]
    cal.provenance["validation_ranks"] = list(validation_ranks)
    cal.provenance["shared_letter_checks"] = _shared_letter_checks(
        specs, fit_corpus, fit_ranks, cal)
    return cal


def _shared_letter_checks(specs, corpus, ranks, cal: Calibration) -> dict:
    """Empirical answer to whether identities really share their scale factors.

    The degree-6 identity writes its dimension-term factor with the same
    letter as the degree-7 family; fit it as two free unknowns and report
    which consensus value each one matches.
    """
    spec6 = next((s for s in specs if s.id == (6,)), None)
    if spec6 is None or "g" not in cal.values or "g6" not in cal.values:
        return {}
    probe = FormulaSpec(id=(6,), cof_const=spec6.cof_const, cof_poly=spec6.cof_poly,
                        cof_sym="g6",
                        dim_terms=tuple((poly, "g") for poly, _ in spec6.dim_terms),
                        theta_terms=spec6.theta_terms)
    sample = [n for n in ranks if n >= 5][:3]
    matches_g6, matches_g = True, True
    for n in sample:
        res = _fit_spec_at_rank(probe, corpus, n)
        if isinstance(res, str):
            return {"degree6_dim_factor": f"fit failed: {res}"}
        matches_g6 &= res["g"] == cal.values["g6"](n)
        matches_g &= res["g"] == cal.values["g"](n)
    return {"degree6_dim_factor": {
        "matches_g6": matches_g6, "matches_g": matches_g, "ranks_checked": sample}}


# ---------------------------------------------------------------------------
# derived identities (arbitrary degree)
# ---------------------------------------------------------------------------


def derivation_basis(degree: int) -> tuple[Partition, ...]:
    """No-1 partitions of matching parity up to the degree; () is the constant."""
    degrees = range(degree % 2, degree + 1, 2)
    out: list[Partition] = []
    for d in degrees:
        if d == 0:
            out.append(())
        else:
            out.extend(partitions_without_ones(d))
    return tuple(out)


@dataclass(frozen=True)
class DerivedFormula:
    """A fitted identity: rep_cof(id) = dim(R) * sum_Q c_Q(N) * Theta_Q(top).

    ``valid_from`` is the smallest rank at which the identity has been
    verified on held-out tables; the solver never uses it below that.
    """

    id: Partition
    coefficients: dict[Partition, RatFuncN]
    fit_ranks: tuple[int, ...]
    valid_from: int = 2

    @property
    def degree(self) -> int:
        return sum(self.id)

    def theta_side(self, top: Partition, rank: int) -> Fraction:
        d = to_dynkin(top, rank)
        total = Fraction(0)
        for q, c in self.coefficients.items():
            v = c(rank)
            for deg in q:
                v *= theta_power(deg, d)
            total += v
        return total

    def residual(self, table: MultiplicityTable, rank: int) -> Fraction:
        return (rep_cof(table, self.id, rank)
                - rep_dimension(table, rank) * self.theta_side(table.top, rank))

    def row(self, top: Partition, rank: int) -> dict[Partition, Fraction]:
        ts = self.theta_side(top, rank)
        return {label: physical_cof(label, self.id, rank)
                       - orbit_dimension(label, rank) * ts
                for label in sub_dominants(top)}


def derive_formula(id: Partition, corpus: list[CorpusRep],
                   ranks: list[int] | None = None,
                   holdout: list[CorpusRep] | None = None) -> DerivedFormula:
    """Fit a new identity for the given no-1 partition from oracle data alone.

    Per rank, solves exactly for the coefficients of every parity-matching
    Theta monomial in rep_cof/dim; the per-rank solutions are reconstructed
    as rational functions of N and validated, exactly, on held-out tables.
    """
    id = tuple(id)
    degree = sum(id)
    if degree < 4 or (id and id[-1] < 2):
        raise DerivationError("identity index must be a no-1 partition of degree >= 4")
    if holdout is None:
        holdout, corpus = corpus[::4], [r for i, r in enumerate(corpus) if i % 4]
    basis = derivation_basis(degree)
    if len(corpus) <= len(basis):
        raise DerivationError(
            f"corpus ({len(corpus)} reps) must exceed the ansatz basis ({len(basis)})")
    sigma_max = max(len(top) for top, _ in corpus)
    min_rank = max(degree - 1, sigma_max + 1)
    if ranks is None:
        ranks = list(range(min_rank, min_rank + len(basis) + 20))
    usable = [n for n in ranks if n >= min_rank]
    if len(usable) < 6:
        raise DerivationError("not enough ranks above the independence threshold")

    per_rank: dict[int, list[Fraction]] = {}
    for n in usable:
        rows, rhs = [], []
        for top, table in corpus:
            d = to_dynkin(top, n)
            row = []
            for q in basis:
                v = Fraction(1)
                for deg in q:
                    v *= theta_power(deg, d)
                row.append(v)
            rows.append(row)
            rhs.append(Fraction(rep_cof(table, id, n), rep_dimension(table, n)))
        try:
            sol, _, _ = solve_linear_exact(ExactMatrix.from_rows(rows), rhs)
        except InconsistentSystemError as e:
            raise DerivationError(f"ansatz inconsistent at N={n}") from e
        except UnderdeterminedSystemError as e:
            raise DerivationError(f"corpus too degenerate at N={n}") from e
        per_rank[n] = sol

    hints = product_hints(degree)
    coefficients: dict[Partition, RatFuncN] = {}
    for i, q in enumerate(basis):
        pts = [(n, per_rank[n][i]) for n in usable]
        try:
            rf = reconstruct_rankwise(pts, hints=hints)
        except CalibrationError as e:
            raise DerivationError(f"reconstruction failed for monomial {q}") from e
        if not rf.num.is_zero:
            coefficients[q] = rf
    formula = DerivedFormula(id=id, coefficients=coefficients,
                             fit_ranks=tuple(usable))
    # validate on held-out tables, including ranks well below and above the
    # fit window; failures above the window are fatal, failures below it
    # only raise the rank floor the solver is allowed to use
    check_ranks = sorted(set(range(2, min_rank)) | set(usable) | {max(usable) + 7})
    failures: list[int] = []
    checks = 0
    for top, table in holdout:
        for n in check_ranks:
            if n <= len(top):
                continue
            try:
                r = formula.residual(table, n)
            except PoleError:
                if n >= min_rank:
                    failures.append(n)
                continue
            checks += 1
            if r != 0:
                failures.append(n)
    if checks == 0:
        raise DerivationError("validation corpus is empty")
    if any(n >= min_rank for n in failures):
        first = min(n for n in failures if n >= min_rank)
        raise DerivationError(f"validation failed at N={first}")
    floor = max(failures) + 1 if failures else 2
    return DerivedFormula(id=id, coefficients=coefficients,
                          fit_ranks=tuple(usable), valid_from=floor)


# ---------------------------------------------------------------------------
# linear-system solver for multiplicities
# ---------------------------------------------------------------------------


@dataclass
class SolveReport:
    top: Partition
    ranks: tuple[int, ...]
    formulas: tuple[tuple[str, str], ...]      # (kind, id string)
    rank: int
    nullity: int
    table: MultiplicityTable | None
    oracle_match: bool | None = None
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        from .partitions import format_partition
        mult = {}
        if self.table is not None:
            for label, m in self.table.in_grade_order():
                mult[format_partition(label)] = m
        return {
            "top": format_partition(self.top),
            "ranks": list(self.ranks),
            "formulas": [{"kind": k, "id": i} for k, i in self.formulas],
            "system_rank": self.rank,
            "nullity": self.nullity,
            "multiplicities": mult,
            "oracle_match": self.oracle_match,
            "warnings": list(self.warnings),
        }


def _formula_tag(formula) -> tuple[str, str]:
    kind = "builtin" if isinstance(formula, FormulaSpec) else "derived"
    return kind, format_formula_id(formula.id)


def _row_for(formula, cal: CalibrationValues | None, top: Partition,
             rank: int) -> dict[Partition, Fraction]:
    if isinstance(formula, FormulaSpec):
        if cal is None:
            raise SolveError("transcribed identities need a calibration")
        return formula_row(formula, top, rank, cal)
    return formula.row(top, rank)


def solve_multiplicities(top: Partition, formulas: list, cal: CalibrationValues | None,
                         ranks: list[int] | None = None,
                         cross_check: bool = False) -> SolveReport:
    """Solve the exact linear system for all multiplicities below ``top``.

    One equation per (identity, rank).  If the system is rank-deficient the
    rank set is extended automatically (up to sigma + unknowns + 5) before
    giving up.  Non-integral or negative solutions raise SolveError: they
    signal an invalid identity or calibration, never a rounding issue.
    """
    top = tuple(top)
    if not formulas:
        raise SolveError("no identities supplied")
    labels = sub_dominants(top)
    unknowns = labels[:-1]
    sigma = len(top)
    warnings: list[str] = []
    tags = tuple(_formula_tag(f) for f in formulas)
    if not unknowns:
        table = MultiplicityTable(top=top, entries={top: 1} if top else {(): 1})
        return SolveReport(top=top, ranks=(), formulas=tags, rank=0, nullity=0,
                           table=table, warnings=warnings)
    floor = max([sigma + 1] + [f.valid_from for f in formulas
                               if isinstance(f, DerivedFormula)])
    if ranks is None:
        ranks = list(range(floor, floor + len(unknowns) + 2))
    ranks = sorted(set(ranks))
    if any(n <= sigma for n in ranks):
        raise SolveError(f"all ranks must exceed sigma={sigma}")
    max_rank = max(max(ranks), floor + len(unknowns) + 4)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    used: list[int] = []

    def add_rank(n: int):
        for f in formulas:
            if isinstance(f, DerivedFormula) and n < f.valid_from:
                warnings.append(f"skipped N={n} for {_formula_tag(f)[1]}: "
                                "below the identity's validated rank")
                continue
            try:
                row = _row_for(f, cal, top, n)
            except PoleError:
                warnings.append(f"skipped N={n} for {_formula_tag(f)[1]}: pole")
                continue
            rows.append([row[u] for u in unknowns])
            rhs.append(-row[top])
        used.append(n)

    for n in ranks:
        add_rank(n)
    while True:
        try:
            if not rows:
                raise UnderdeterminedSystemError(0, len(unknowns))
            sol, rank, nullity = solve_linear_exact(
                ExactMatrix.from_rows(rows), rhs)
            break
        except UnderdeterminedSystemError as e:
            nxt = used[-1] + 1 if used else sigma + 1
            if nxt > max_rank:
                raise SolveError(
                    f"system underdetermined (rank {e.rank}, nullity {e.nullity}) "
                    f"after extending ranks to {max_rank}") from None
            add_rank(nxt)
        except InconsistentSystemError as e:
            raise SolveError(
                "system inconsistent: an identity or its calibration is invalid "
                f"(rank {e.rank})") from None

    entries = {top: 1}
    for label, value in zip(unknowns, sol):
        if value.denominator != 1 or value < 0:
            raise SolveError(
                f"non-integral or negative multiplicity {value} for {label}: "
                "upstream identity or calibration fault")
        if len(label) > max(used) + 1:
            # the label's orbit is empty at every rank used, so its column is
            # all zeros and the solver cannot see it; with nullity 0 that
            # cannot happen, but guard anyway
            warnings.append(f"label {label} unconstrained at the ranks used")
        entries[label] = int(value)
    table = MultiplicityTable(top=top, entries=entries)

    oracle_match = None
    if cross_check:
        n0 = min(used)
        oracle = freudenthal(to_dynkin(top, n0))
        oracle_match = all(oracle.entries[lab] == table.entries.get(lab, 0)
                           for lab in oracle.entries)
        if not oracle_match:
            warnings.append(f"oracle mismatch at N={n0}")
    return SolveReport(top=top, ranks=tuple(used), formulas=tags, rank=rank,
                       nullity=nullity, table=table, oracle_match=oracle_match,
                       warnings=warnings)


def assemble_system(top: Partition, formulas: list, cal: CalibrationValues | None,
                    ranks: list[int]) -> tuple[ExactMatrix, list[Fraction]]:
    """The raw (matrix, rhs) pair for the unknown multiplicities below top."""
    top = tuple(top)
    labels = sub_dominants(top)
    unknowns = labels[:-1]
    rows, rhs = [], []
    for n in sorted(set(ranks)):
        for f in formulas:
            row = _row_for(f, cal, top, n)
            rows.append([row[u] for u in unknowns])
            rhs.append(-row[top])
    if not rows:
        return ExactMatrix(0, len(unknowns), ()), []
    return ExactMatrix.from_rows(rows), rhs
