"""Exact linear algebra over rationals.

Vectors are tuples of rational scalars, matrices are tuples of row vectors.
Everything here is exact: no floats, no rounding, ever.  Scalars are
gmpy2.mpq when available (much faster) and fractions.Fraction otherwise;
both carry numerator/denominator in lowest terms with positive denominator.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

try:  # pragma: no cover - environment dependent
    from gmpy2 import mpq as _mpq

    def frac(x, den=None) -> "Rational":
        if den is not None:
            return _mpq(x, den)
        if type(x) is _mpq:
            return x
        return _mpq(x)

    Rational = _mpq(0).__class__
except ImportError:  # pragma: no cover
    Rational = Fraction

    def frac(x, den=None) -> "Rational":
        if den is not None:
            return Fraction(x, den)
        if type(x) is Fraction:
            return x
        return Fraction(x)

Vec = tuple  # of Rational
Mat = tuple  # of Vec

ZERO = frac(0)
ONE = frac(1)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(i: int, n: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c: Fraction, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def vdot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def is_zero(u: Vec) -> bool:
    return all(a == 0 for a in u)


def mat_vec(m: Mat, x: Vec) -> Vec:
    return tuple(vdot(row, x) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m, strict=True)) if m else ()


def identity_mat(n: int) -> Mat:
    return tuple(unit_vec(i, n) for i in range(n))


def primitive(u: Vec) -> Vec:
    """Scale by a positive rational so entries are coprime integers."""
    if is_zero(u):
        return u
    den = 1
    for a in u:
        d = int(a.denominator)
        den = den * d // gcd(den, d)
    ints = [int(a * den) for a in u]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(frac(a // g) for a in ints)


def sign_normalized(u: Vec) -> Vec:
    """Primitive vector with positive leading nonzero entry (line/hyperplane key)."""
    p = primitive(u)
    for a in p:
        if a < 0:
            return tuple(-x for x in p)
        if a > 0:
            return p
    return p


def rref(rows: Sequence[Vec]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Vec], n: int) -> list[Vec]:
    """Basis of {x : row . x = 0 for all rows}, deterministic."""
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve_affine(rows: Sequence[Vec], rhs: Sequence[Fraction]) -> Vec | None:
    """One solution of row . x = rhs_i for all i, or None if inconsistent."""
    if not rows:
        return None
    n = len(rows[0])
    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs, strict=True)]
    red, pivots = rref(aug)
    if n in pivots:  # pivot in the augmented column: 0 = 1
        return None
    x = [ZERO] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return tuple(x)


def in_span(v: Vec, basis: Sequence[Vec]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis)) == rank(list(basis) + [v])


def extend_to_basis(vectors: Sequence[Vec], n: int) -> list[Vec]:
    """Extend independent vectors to a basis of R^n with standard unit vectors."""
    chosen = list(vectors)
    for i in range(n):
        cand = unit_vec(i, n)
        if rank(chosen + [cand]) > rank(chosen):
            chosen.append(cand)
        if len(chosen) == n:
            break
    return chosen


class AffineMap:
    """x -> matrix @ x + offset, exact."""

    __slots__ = ("matrix", "offset")

    def __init__(self, matrix: Sequence[Sequence], offset: Sequence):
        self.matrix: Mat = tuple(vec(row) for row in matrix)
        self.offset: Vec = vec(offset)
        if len(self.matrix) != len(self.offset):
            raise ValueError("matrix rows and offset length disagree")
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")

    @property
    def dim_out(self) -> int:
        return len(self.offset)

    @property
    def dim_in(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def apply(self, x: Vec) -> Vec:
        return vadd(mat_vec(self.matrix, x), self.offset)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: x -> self(inner(x))."""
        m = mat_mul(self.matrix, inner.matrix)
        return AffineMap(m, vadd(mat_vec(self.matrix, inner.offset), self.offset))

    def inverse(self) -> "AffineMap":
        n = self.dim_in
        if self.dim_out != n:
            raise ValueError("only square maps can be inverted")
        aug = [self.matrix[i] + unit_vec(i, n) for i in range(n)]
        red, pivots = rref(aug)
        if len(red) < n or pivots[:n] != list(range(n)):
            raise ValueError("map is not invertible")
        inv = tuple(row[n:] for row in red)
        return AffineMap(inv, vscale(frac(-1), mat_vec(inv, self.offset)))

    @staticmethod
    def identity(n: int) -> "AffineMap":
        return AffineMap(identity_mat(n), zero_vec(n))

    def __repr__(self):
        return f"AffineMap({self.matrix!r}, {self.offset!r})"


_RATIONAL_RE = re.compile(r"^[+-]?\d+(\s*/\s*[1-9]\d*)?$")


def parse_rational(s) -> "Rational":
    """Parse 'p/q' or an integer literal; anything else (floats) is rejected."""
    if isinstance(s, int):
        return frac(s)
    s = s.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not an exact rational literal: {s!r}")
    return frac(Fraction(s.replace(" ", "")))


def format_rational(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
