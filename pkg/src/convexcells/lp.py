"""Exact linear programming over the rationals.

A small two-phase simplex with Bland's rule (no cycling, fully deterministic).
Feasibility of systems with strict inequalities is decided by slack
maximization: maximize d subject to (strict rows shifted by d) and d <= 1;
the system is strictly feasible iff the optimum is positive.

Infeasible answers carry Farkas multipliers obtained by solving the
alternative system, so every verdict is certified and re-checkable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Vec, ZERO, ONE, frac, vdot, zero_vec

EQ = "="
LE = "<="
LT = "<"

_RELS = (EQ, LE, LT)


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class LinConstraint:
    """coeffs . x  rel  rhs, with rel one of =, <=, <."""

    coeffs: Vec
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELS:
            raise ValueError(f"bad relation {self.rel!r}")

    def holds(self, x: Vec) -> bool:
        lhs = vdot(self.coeffs, x)
        if self.rel == EQ:
            return lhs == self.rhs
        if self.rel == LE:
            return lhs <= self.rhs
        return lhs < self.rhs

    def scaled(self, c: Fraction) -> "LinConstraint":
        if c <= 0:
            raise ValueError("only positive scaling preserves a constraint")
        return LinConstraint(tuple(c * a for a in self.coeffs), self.rel, c * self.rhs)


def constraint(coeffs, rel: str, rhs) -> LinConstraint:
    return LinConstraint(tuple(frac(a) for a in coeffs), rel, frac(rhs))


@dataclass(frozen=True)
class Feasible:
    point: Vec
    slack: Fraction = ONE  # optimal common slack of the strict rows, capped at 1


@dataclass(frozen=True)
class Infeasible:
    """Nonnegative multipliers on <=/< rows and free multipliers on = rows.

    The combination cancels all variables and derives 0 <= rhs with rhs < 0,
    or (when weight sits on a strict row) 0 < rhs with rhs <= 0.  None when
    the caller skipped certification.
    """

    multipliers: tuple[Fraction, ...] | None


OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    prow = tab[row]
    for i, trow in enumerate(tab):
        if i != row and trow[col] != 0:
            f = trow[col]
            tab[i] = [x - f * y for x, y in zip(trow, prow)]
    basis[row] = col


def _run_simplex(tab: list[list[Fraction]], basis: list[int],
                 cost: list[Fraction], allowed: Sequence[bool]) -> str:
    """Maximize; cost is the reduced-cost row (last entry = -objective value).

    Bland's rule: entering = lowest-index allowed column with positive reduced
    cost; leaving = lowest basis index among minimal ratios.
    """
    ncols = len(cost) - 1
    while True:
        col = next((j for j in range(ncols) if allowed[j] and cost[j] > 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i, trow in enumerate(tab):
            a = trow[col]
            if a > 0:
                ratio = trow[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        row = best[1]
        _pivot(tab, basis, row, col)
        f = cost[col]
        cost[:] = [x - f * y for x, y in zip(cost, tab[row])]


def simplex_max(n: int, objective: Vec,
                eq_rows: Sequence[tuple[Vec, Fraction]],
                le_rows: Sequence[tuple[Vec, Fraction]]):
    """Maximize objective . x over free x with eq/le row constraints.

    Returns (status, point, value); point/value are None unless OPTIMAL.
    Artificial columns exist only for rows whose slack cannot start basic,
    and are sliced away before phase 2.
    """
    nslack = len(le_rows)
    base_cols = 2 * n + nslack          # u | w | slacks, x = u - w
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    art_rows: list[int] = []
    si = 0
    for a, b in eq_rows:
        if len(a) != n:
            raise DimensionMismatch(f"row of length {len(a)}, expected {n}")
        row = list(a) + [-x for x in a] + [ZERO] * nslack + [b]
        if b < 0:
            row = [-x for x in row]
        tab.append(row)
        basis.append(-1)
        art_rows.append(len(tab) - 1)
    for a, b in le_rows:
        if len(a) != n:
            raise DimensionMismatch(f"row of length {len(a)}, expected {n}")
        row = list(a) + [-x for x in a] + [ZERO] * nslack + [b]
        row[2 * n + si] = ONE
        if b < 0:
            row = [-x for x in row]
            basis.append(-1)
            art_rows.append(len(tab))
        else:
            basis.append(2 * n + si)
        si += 1
        tab.append(row)

    if art_rows:
        ncols = base_cols + len(art_rows)
        for row in tab:
            row[-1:-1] = [ZERO] * len(art_rows)
        for k, ri in enumerate(art_rows):
            tab[ri][base_cols + k] = ONE
            basis[ri] = base_cols + k
        # phase 1: maximize -(sum of artificials); reduced costs from art rows
        cost = [ZERO] * (ncols + 1)
        for ri in art_rows:
            row = tab[ri]
            for j in range(ncols + 1):
                if row[j]:
                    cost[j] += row[j]
        for j in range(base_cols, ncols):
            cost[j] = ZERO
        allowed = [True] * ncols
        status = _run_simplex(tab, basis, cost, allowed)
        assert status == OPTIMAL  # bounded above by 0
        if cost[-1] != 0:
            return INFEASIBLE, None, None
        for i in range(len(tab)):
            if basis[i] >= base_cols:
                col = next((j for j in range(base_cols) if tab[i][j] != 0), None)
                if col is not None:
                    _pivot(tab, basis, i, col)
        keep = [i for i in range(len(tab)) if basis[i] < base_cols]
        tab = [tab[i][:base_cols] + [tab[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]

    # phase 2 on real columns only
    allowed = [True] * base_cols
    obj = list(objective) + [-x for x in objective] + [ZERO] * nslack + [ZERO]
    cost = obj[:]
    for i, bv in enumerate(basis):
        if obj[bv] != 0:
            f = obj[bv]
            row = tab[i]
            cost = [c - f * t for c, t in zip(cost, row)]
    for bv in basis:
        cost[bv] = ZERO
    status = _run_simplex(tab, basis, cost, allowed)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    xs = [ZERO] * base_cols
    for i, bv in enumerate(basis):
        xs[bv] = tab[i][-1]
    point = tuple(xs[j] - xs[n + j] for j in range(n))
    value = -cost[-1]
    return OPTIMAL, point, value


def _split(constraints: Sequence[LinConstraint]):
    eqs = [(c.coeffs, c.rhs) for c in constraints if c.rel == EQ]
    les = [(c.coeffs, c.rhs) for c in constraints if c.rel == LE]
    lts = [(c.coeffs, c.rhs) for c in constraints if c.rel == LT]
    return eqs, les, lts


def _check_dims(constraints: Sequence[LinConstraint], dim: int) -> None:
    for c in constraints:
        if len(c.coeffs) != dim:
            raise DimensionMismatch(
                f"constraint of arity {len(c.coeffs)} in ambient dimension {dim}")


def solve_feasibility(constraints: Sequence[LinConstraint], dim: int,
                      certify: bool = True):
    """Decide exact feasibility (strict rows strictly).

    The witness of a Feasible answer maximizes the common slack of the
    strict rows (capped at 1); an Infeasible answer carries re-checkable
    Farkas multipliers unless certify is False.
    """
    _check_dims(constraints, dim)
    eqs, les, lts = _split(constraints)
    # maximize d subject to: le rows, strict rows with +d, d <= 1
    n = dim + 1
    obj = zero_vec(dim) + (ONE,)
    eq_rows = [(a + (ZERO,), b) for a, b in eqs]
    le_rows = [(a + (ZERO,), b) for a, b in les]
    le_rows += [(a + (ONE,), b) for a, b in lts]
    le_rows.append((zero_vec(dim) + (ONE,), ONE))
    status, point, value = simplex_max(n, obj, eq_rows, le_rows)
    if status == INFEASIBLE:
        return Infeasible(_farkas_relaxed(constraints, dim) if certify else None)
    assert status == OPTIMAL  # d <= 1 bounds the objective
    if lts and value <= 0:
        return Infeasible(_farkas_strict(constraints, dim) if certify else None)
    return Feasible(point[:dim], value)


def feasible_with_slack(constraints: Sequence[LinConstraint], dim: int):
    """(point, slack) with the strict rows held with common slack, or None."""
    res = solve_feasibility(constraints, dim, certify=False)
    if isinstance(res, Infeasible):
        return None
    return res.point, res.slack


def strictly_feasible(constraints: Sequence[LinConstraint], dim: int) -> Vec | None:
    res = solve_feasibility(constraints, dim, certify=False)
    return None if isinstance(res, Infeasible) else res.point


def is_feasible(constraints: Sequence[LinConstraint], dim: int) -> bool:
    return isinstance(solve_feasibility(constraints, dim, certify=False), Feasible)


def _feasible_point_linear(eq_rows, le_rows, n) -> Vec | None:
    status, point, _ = simplex_max(n, zero_vec(n), eq_rows, le_rows)
    return point if status == OPTIMAL else None


def _farkas_relaxed(constraints, dim) -> tuple[Fraction, ...]:
    """Multipliers proving the <=-relaxation infeasible: 0 <= -1 derivable."""
    them = list(constraints)
    m = len(them)
    # variables: y_i (>= 0 for <=,<; free for =)
    eq_rows = []
    for coord in range(dim):
        row = tuple(c.coeffs[coord] for c in them)
        eq_rows.append((row, ZERO))
    le_rows = [(tuple(c.rhs for c in them), frac(-1))]
    for i, c in enumerate(them):
        if c.rel != EQ:
            le_rows.append((tuple(-ONE if j == i else ZERO for j in range(m)), ZERO))
    point = _feasible_point_linear(eq_rows, le_rows, m)
    assert point is not None, "Farkas alternative must be solvable"
    return point


def _farkas_strict(constraints, dim) -> tuple[Fraction, ...]:
    """Multipliers with unit total weight on strict rows deriving 0 < 0."""
    them = list(constraints)
    m = len(them)
    eq_rows = []
    for coord in range(dim):
        row = tuple(c.coeffs[coord] for c in them)
        eq_rows.append((row, ZERO))
    eq_rows.append((tuple(ONE if c.rel == LT else ZERO for c in them), ONE))
    le_rows = [(tuple(c.rhs for c in them), ZERO)]
    for i, c in enumerate(them):
        if c.rel != EQ:
            le_rows.append((tuple(-ONE if j == i else ZERO for j in range(m)), ZERO))
    point = _feasible_point_linear(eq_rows, le_rows, m)
    assert point is not None, "strict Farkas alternative must be solvable"
    return point


def verify_farkas(constraints: Sequence[LinConstraint], dim: int,
                  multipliers: Sequence[Fraction]) -> bool:
    """Re-check that the multipliers derive a contradiction."""
    if len(multipliers) != len(constraints):
        return False
    combo = [ZERO] * dim
    rhs = ZERO
    strict_weight = ZERO
    for y, c in zip(multipliers, constraints):
        if c.rel != EQ and y < 0:
            return False
        for i, a in enumerate(c.coeffs):
            combo[i] += y * a
        rhs += y * c.rhs
        if c.rel == LT:
            strict_weight += y
    if any(v != 0 for v in combo):
        return False
    if strict_weight > 0:
        return rhs <= 0
    return rhs < 0


def max_slack_point(constraints: Sequence[LinConstraint], dim: int):
    """Maximize the common slack of strict rows (capped at 1).

    Returns (point, slack) with slack > 0, or None if not strictly feasible.
    """
    return feasible_with_slack(constraints, dim)


def optimize(objective: Vec, constraints: Sequence[LinConstraint], dim: int,
             maximize: bool = True):
    """Optimize over the <=/= rows (strict rows are refused).

    Returns (status, point, value) in the original orientation.
    """
    _check_dims(constraints, dim)
    eqs, les, lts = _split(constraints)
    if lts:
        raise ValueError("optimize only accepts non-strict systems")
    obj = objective if maximize else tuple(-x for x in objective)
    status, point, value = simplex_max(dim, obj, eqs, les)
    if status != OPTIMAL:
        return status, None, None
    return status, point, (value if maximize else -value)
