"""Exact intervals on the rational line, with open/closed ends.

Used for the one-dimensional traces of sets along affine lines: every cell
meets a line in an interval, and a convex set meets it in the merged union.
None stands for an infinite end.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lp import EQ, LE, LT


@dataclass(frozen=True)
class Interval:
    lo: Fraction | None       # None = -infinity
    lo_open: bool
    hi: Fraction | None       # None = +infinity
    hi_open: bool

    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        if self.lo == self.hi:
            return self.lo_open or self.hi_open
        return True

    def contains(self, t: Fraction) -> bool:
        if self.lo is not None and (t < self.lo or (t == self.lo and self.lo_open)):
            return False
        if self.hi is not None and (t > self.hi or (t == self.hi and self.hi_open)):
            return False
        return True

    def __str__(self):
        lo = "-oo" if self.lo is None else str(self.lo)
        hi = "+oo" if self.hi is None else str(self.hi)
        return f"{'(' if self.lo_open or self.lo is None else '['}{lo}, {hi}" \
               f"{')' if self.hi_open or self.hi is None else ']'}"


FULL = Interval(None, True, None, True)


def from_rows(rows) -> Interval | None:
    """Intersection of {t : alpha*t rel beta} over rows; None when empty."""
    cur = FULL
    for alpha, rel, beta in rows:
        if alpha == 0:
            ok = beta == 0 if rel == EQ else (beta >= 0 if rel == LE else beta > 0)
            if not ok:
                return None
            continue
        t0 = beta / alpha
        if rel == EQ:
            piece = Interval(t0, False, t0, False)
        elif alpha > 0:
            piece = Interval(None, True, t0, rel == LT)
        else:  # alpha < 0 flips the side
            piece = Interval(t0, rel == LT, None, True)
        cur = intersect(cur, piece)
        if cur is None:
            return None
    return cur


def intersect(a: Interval, b: Interval) -> Interval | None:
    if a.lo is None:
        lo, lo_open = b.lo, b.lo_open
    elif b.lo is None or a.lo > b.lo:
        lo, lo_open = a.lo, a.lo_open
    elif b.lo > a.lo:
        lo, lo_open = b.lo, b.lo_open
    else:
        lo, lo_open = a.lo, a.lo_open or b.lo_open
    if a.hi is None:
        hi, hi_open = b.hi, b.hi_open
    elif b.hi is None or a.hi < b.hi:
        hi, hi_open = a.hi, a.hi_open
    elif b.hi < a.hi:
        hi, hi_open = b.hi, b.hi_open
    else:
        hi, hi_open = a.hi, a.hi_open or b.hi_open
    out = Interval(lo, lo_open, hi, hi_open)
    return None if out.is_empty() else out


def merge(intervals: list[Interval]) -> list[Interval]:
    """Union of intervals as a sorted list of maximal disjoint intervals."""
    items = [iv for iv in intervals if not iv.is_empty()]
    items.sort(key=lambda iv: (iv.lo is not None, iv.lo if iv.lo is not None else 0,
                               iv.lo_open))
    out: list[Interval] = []
    for iv in items:
        if out and _touches(out[-1], iv):
            out[-1] = _join(out[-1], iv)
        else:
            out.append(iv)
    return out


def _touches(a: Interval, b: Interval) -> bool:
    # b.lo >= a.lo by sort order
    if a.hi is None or b.lo is None:
        return True
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return not (a.hi_open and b.lo_open)
    return False


def _join(a: Interval, b: Interval) -> Interval:
    if a.hi is None:
        hi, hi_open = None, True
    elif b.hi is None:
        hi, hi_open = None, True
    elif a.hi > b.hi:
        hi, hi_open = a.hi, a.hi_open
    elif b.hi > a.hi:
        hi, hi_open = b.hi, b.hi_open
    else:
        hi, hi_open = a.hi, a.hi_open and b.hi_open
    return Interval(a.lo, a.lo_open, hi, hi_open)
