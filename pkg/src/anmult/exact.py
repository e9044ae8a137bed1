"""Exact rational arithmetic substrate.

Scalars are `fractions.Fraction`.  On top of those this module provides dense
univariate polynomials in the rank variable N (`PolyN`), reduced rational
functions in N (`RatFuncN`), exact interpolation / rational-function
reconstruction, and fraction-free exact linear solving.

Nothing in this module may introduce floating point; float inputs are
rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction


class InconsistentSystemError(ValueError):
    """Linear system has no solution."""

    def __init__(self, rank: int, nullity: int):
        super().__init__(f"no solution (rank {rank}, nullity {nullity})")
        self.rank = rank
        self.nullity = nullity


class UnderdeterminedSystemError(ValueError):
    """Linear system is consistent but has free variables."""

    def __init__(self, rank: int, nullity: int):
        super().__init__(f"underdetermined (rank {rank}, nullity {nullity})")
        self.rank = rank
        self.nullity = nullity


class ReconstructionError(ValueError):
    """No rational function within the degree bounds fits the samples."""


class PoleError(ZeroDivisionError):
    """Rational function evaluated at a zero of its denominator."""


def rational(x) -> Fraction:
    """Coerce to Fraction, rejecting floats."""
    if isinstance(x, float):
        raise TypeError("floating-point values are not allowed in exact arithmetic")
    return Fraction(x)


class PolyN:
    """Dense univariate polynomial in the rank variable N.

    ``coeffs[i]`` is the coefficient of ``N**i``; the trailing coefficient is
    nonzero except for the zero polynomial (empty coefficient tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, cs: list[Fraction]) -> "PolyN":
        # internal fast path: coefficients are already exact scalars
        while cs and cs[-1] == 0:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def const(cls, c) -> "PolyN":
        return cls((c,))

    @classmethod
    def variable(cls) -> "PolyN":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n) -> Fraction:
        n = rational(n)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def _coerce(self, other) -> "PolyN | None":
        if isinstance(other, PolyN):
            return other
        if isinstance(other, (int, Fraction)):
            return PolyN((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyN._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyN._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PolyN()
            return PolyN._raw([c * other for c in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return PolyN()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return PolyN._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = PolyN((1,))
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "PolyN"):
        o = self._coerce(other)
        if o is None or o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(o.coeffs) + 1, 0)
        dlead = o.coeffs[-1]
        dd = o.degree
        while len(rem) - 1 >= dd and rem:
            k = len(rem) - 1 - dd
            f = rem[-1] / dlead
            quo[k] = f
            for i, c in enumerate(o.coeffs):
                rem[k + i] -= f * c
            while rem and rem[-1] == 0:
                rem.pop()
        return PolyN(quo), PolyN(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyN({self.pretty()})"

    def pretty(self, var: str = "N") -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else f"{mag}*"
                body = f"{head}{var}" if i == 1 else f"{head}{var}^{i}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: PolyN, b: PolyN) -> PolyN:
    """Monic greatest common divisor, by the Euclidean algorithm."""
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a * (Fraction(1) / a.coeffs[-1])


def poly_eval(p: PolyN, n: int) -> Fraction:
    return p(n)


def poly_interpolate(points: Sequence[tuple[int, Fraction]]) -> PolyN:
    """Unique polynomial of degree < len(points) through the given points.

    Newton divided differences over exact rationals.  Raises ValueError on a
    duplicate abscissa.
    """
    if not points:
        raise ValueError("need at least one point")
    xs = [rational(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa")
    coef = [rational(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = PolyN()
    var = PolyN.variable()
    for i in range(n - 1, -1, -1):
        poly = poly * (var - xs[i]) + coef[i]
    return poly


class RatFuncN:
    """Reduced rational function in N with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num = num if isinstance(num, PolyN) else PolyN(num if isinstance(num, (tuple, list)) else (num,))
        den = den if isinstance(den, PolyN) else PolyN(den if isinstance(den, (tuple, list)) else (den,))
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num = PolyN()
            self.den = PolyN((1,))
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        scale = Fraction(1) / den.coeffs[-1]
        self.num = num * scale
        self.den = den * scale

    @classmethod
    def from_poly(cls, p: PolyN) -> "RatFuncN":
        return cls(p, PolyN((1,)))

    @property
    def is_polynomial(self) -> bool:
        return self.den == PolyN((1,))

    def __call__(self, n) -> Fraction:
        d = self.den(n)
        if d == 0:
            raise PoleError(f"pole at N={n}")
        return self.num(n) / d

    def __eq__(self, other):
        if not isinstance(other, RatFuncN):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial:
            return f"RatFuncN({self.num.pretty()})"
        return f"RatFuncN(({self.num.pretty()}) / ({self.den.pretty()}))"


@dataclass(frozen=True)
class ExactMatrix:
    """Dense row-major matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(rational(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (solution-preserving)."""
    out = []
    for r in rows:
        fr = [rational(x) for x in r]
        m = lcm(*(f.denominator for f in fr)) if fr else 1
        out.append([int(f * m) for f in fr])
    return out


def _echelon_ff(m: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form on an integer matrix.

    Returns the echelon rows and the list of pivot column indices.  All
    divisions are exact, which bounds intermediate entry growth.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            for j in range(c + 1, ncols):
                m[i][j] = (pivot * m[i][j] - mic * m[r][j]) // prev
            m[i][c] = 0
        prev = pivot
        piv_cols.append(c)
        r += 1
    return m, piv_cols


def _back_substitute(ech: list[list[int]], piv_cols: list[int], ncols: int,
                     free_values: dict[int, Fraction]) -> list[Fraction]:
    sol: list[Fraction] = [Fraction(0)] * ncols
    for c, v in free_values.items():
        sol[c] = v
    for r in range(len(piv_cols) - 1, -1, -1):
        c = piv_cols[r]
        acc = Fraction(0)
        for j in range(c + 1, ncols):
            if sol[j]:
                acc += ech[r][j] * sol[j]
        sol[c] = -acc / ech[r][c]
    return sol


def solve_linear_exact(a: ExactMatrix, b: Sequence) -> tuple[list[Fraction], int, int]:
    """Solve a x = b exactly via fraction-free elimination.

    Returns ``(solution, rank, nullity)`` when the system has a unique
    solution.  Raises InconsistentSystemError / UnderdeterminedSystemError
    (carrying rank and nullity) otherwise.
    """
    if a.rows != len(b):
        raise ValueError("right-hand side length does not match matrix rows")
    aug = [a.row(i) + [rational(b[i])] for i in range(a.rows)]
    ech, piv_cols = _echelon_ff(_integer_rows(aug))
    rank = len(piv_cols)
    if piv_cols and piv_cols[-1] == a.cols:  # pivot in the rhs column
        rank -= 1
        nullity = a.cols - rank
        raise InconsistentSystemError(rank, nullity)
    nullity = a.cols - rank
    if nullity > 0:
        raise UnderdeterminedSystemError(rank, nullity)
    sol: list[Fraction] = [Fraction(0)] * a.cols
    for r in range(rank - 1, -1, -1):
        c = piv_cols[r]
        acc = Fraction(ech[r][a.cols])
        for j in range(c + 1, a.cols):
            if sol[j]:
                acc -= ech[r][j] * sol[j]
        sol[c] = acc / ech[r][c]
    return sol, rank, nullity


def nullspace_exact(a: ExactMatrix) -> list[list[Fraction]]:
    """Basis of the exact nullspace of ``a`` (one vector per free column)."""
    ech, piv_cols = _echelon_ff(_integer_rows([a.row(i) for i in range(a.rows)]))
    free_cols = [c for c in range(a.cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        free_values = {c: Fraction(1) if c == fc else Fraction(0) for c in free_cols}
        basis.append(_back_substitute(ech, piv_cols, a.cols, free_values))
    return basis


def ratfunc_reconstruct(points: Sequence[tuple[int, Fraction]],
                        max_num_deg: int, max_den_deg: int) -> RatFuncN:
    """Reconstruct a rational function from exact samples.

    Requires ``len(points) >= max_num_deg + max_den_deg + 1`` with distinct
    abscissae, none of them a pole.  The candidate is validated against every
    sample; failure raises ReconstructionError.
    """
    if len(points) < max_num_deg + max_den_deg + 1:
        raise ValueError("not enough points for the requested degree bounds")
    xs = [rational(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa")
    ys = [rational(y) for _, y in points]
    rows = []
    for x, y in zip(xs, ys):
        row = [x**j for j in range(max_num_deg + 1)]
        row += [-y * x**j for j in range(max_den_deg + 1)]
        rows.append(row)
    basis = nullspace_exact(ExactMatrix.from_rows(rows))
    for vec in basis:
        den = PolyN(vec[max_num_deg + 1 :])
        if den.is_zero:
            continue
        cand = RatFuncN(PolyN(vec[: max_num_deg + 1]), den)
        if all(cand.den(x) != 0 and cand(x) == y for x, y in zip(xs, ys)):
            return cand
    raise ReconstructionError("reconstruction failed")
