"""Finite unions of intervals with symbolic endpoints.

Every set operation goes through a cell decomposition: the endpoints of all
operands are sorted exactly (with :func:`compare_times`) and merged, which
splits the line into points and open gaps.  Each operand either contains a
cell or misses it entirely, so any boolean combination is a per-cell truth
table, and maximal intervals are read back off the cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from ..pef.times import SymbolicTime, compare_times


@dataclass(frozen=True)
class SymbolicInterval:
    low: SymbolicTime
    high: SymbolicTime
    low_closed: bool = True
    high_closed: bool = True

    @staticmethod
    def closed(a, b) -> "SymbolicInterval":
        return SymbolicInterval(_time(a), _time(b), True, True)

    def shift(self, c) -> "SymbolicInterval":
        return SymbolicInterval(self.low.shift(c), self.high.shift(c), self.low_closed, self.high_closed)

    def is_point(self) -> bool:
        return compare_times(self.low, self.high) == 0

    def contains(self, t: SymbolicTime) -> bool:
        c = compare_times(self.low, t)
        if c > 0 or (c == 0 and not self.low_closed):
            return False
        c = compare_times(t, self.high)
        return c < 0 or (c == 0 and self.high_closed)

    def render(self) -> str:
        lb = "[" if self.low_closed else "("
        rb = "]" if self.high_closed else ")"
        return f"{lb}{self.low.render()}, {self.high.render()}{rb}"

    def approx(self) -> tuple[float, float]:
        return self.low.approx(), self.high.approx()


def _time(x) -> SymbolicTime:
    return x if isinstance(x, SymbolicTime) else SymbolicTime.exact(x)


def _nonempty(iv: SymbolicInterval) -> bool:
    c = compare_times(iv.low, iv.high)
    return c < 0 or (c == 0 and iv.low_closed and iv.high_closed)


class IntervalSet:
    """Disjoint, sorted, maximal intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals=()):
        self.intervals = tuple(intervals)

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def of(*intervals) -> "IntervalSet":
        """Normalize arbitrary (possibly overlapping) intervals."""
        return combine([IntervalSet([iv]) for iv in intervals if _nonempty(iv)], any)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def shift(self, c) -> "IntervalSet":
        return IntervalSet(iv.shift(c) for iv in self.intervals)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return combine([self, other], any)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return combine([self, other], all)

    def contains(self, t: SymbolicTime) -> bool:
        return any(iv.contains(t) for iv in self.intervals)

    def render(self) -> str:
        if not self.intervals:
            return "{}"
        return "{" + ", ".join(iv.render() for iv in self.intervals) + "}"

    def __repr__(self) -> str:
        return f"IntervalSet({self.render()})"


def sort_times(times: list) -> tuple[list, list[int]]:
    """Distinct sorted times and, for each input, the index of its class."""
    order = sorted(range(len(times)), key=cmp_to_key(lambda i, j: compare_times(times[i], times[j])))
    points = []
    index = [0] * len(times)
    for i in order:
        if not points or compare_times(points[-1], times[i]) != 0:
            points.append(times[i])
        index[i] = len(points) - 1
    return points, index


def from_cells(points: list, point_in: list, gap_in: list) -> IntervalSet:
    """Maximal intervals from membership of each point and each gap between points."""
    out = []
    m = len(points)
    start = None  # (time, closed)
    for i in range(m):
        if point_in[i]:
            if start is None:
                start = (points[i], True)
        elif start is not None:
            out.append(SymbolicInterval(start[0], points[i], start[1], False))
            start = None
        if i + 1 < m:
            if gap_in[i]:
                if start is None:
                    start = (points[i], False)
            elif start is not None:
                out.append(SymbolicInterval(start[0], points[i], start[1], True))
                start = None
    if start is not None:
        out.append(SymbolicInterval(start[0], points[m - 1], start[1], True))
    return IntervalSet(out)


def combine(sets, fn) -> IntervalSet:
    """The set of cells where ``fn`` of the per-operand membership flags holds."""
    sets = list(sets)
    times = []
    for s in sets:
        for iv in s.intervals:
            times.append(iv.low)
            times.append(iv.high)
    if not times:
        return IntervalSet(()) if not fn([False] * len(sets)) else _everything_error()
    points, index = sort_times(times)
    m = len(points)
    p_flags = [[False] * len(sets) for _ in range(m)]
    g_flags = [[False] * len(sets) for _ in range(max(m - 1, 0))]
    k = 0
    for si, s in enumerate(sets):
        for iv in s.intervals:
            a, b = index[k], index[k + 1]
            k += 2
            if iv.low_closed:
                p_flags[a][si] = True
            if iv.high_closed:
                p_flags[b][si] = True
            for j in range(a + 1, b):
                p_flags[j][si] = True
            for j in range(a, b):
                g_flags[j][si] = True
    point_in = [bool(fn(f)) for f in p_flags]
    gap_in = [bool(fn(f)) for f in g_flags]
    return from_cells(points, point_in, gap_in)


def _everything_error():
    raise ValueError("the combination is unbounded: no endpoints to anchor it")


def rational_between(t1: SymbolicTime, t2: SymbolicTime) -> Fraction:
    """A rational strictly between t1 < t2."""
    while True:
        _, b1 = t1.enclosure()
        a2, _ = t2.enclosure()
        if b1 < a2:
            return (b1 + a2) / 2
        w1 = t1.enclosure()[1] - t1.enclosure()[0]
        w2 = t2.enclosure()[1] - t2.enclosure()[0]
        if w1 >= w2 and w1 > 0:
            t1.refine(w1 / 2)
        elif w2 > 0:
            t2.refine(w2 / 2)
        else:
            raise ValueError("times are not strictly ordered")


def pick_point(iv: SymbolicInterval) -> SymbolicTime:
    """A time in a nonempty interval, preferring a closed endpoint."""
    if iv.low_closed:
        return iv.low
    if iv.high_closed:
        return iv.high
    return SymbolicTime.exact(rational_between(iv.low, iv.high))
