"""Satisfaction sets of atoms and negation-free CNF state formulas over [0, H].

For an atom ``<k, [a, b]>`` the trajectory ``f`` of state k can only enter or
leave [a, b] at a root of ``f - a`` or ``f - b``.  Those roots, together
with 0 and H, split the window into points and open gaps.  On a gap both
differences keep their sign, so one exact sign test at a rational inside the
gap decides the whole gap.  At a root of ``f - a`` the value is exactly a.
"""

from __future__ import annotations

from fractions import Fraction

from ..ctmc import CTMC, Atom, trajectory_pef
from ..pef.core import RealPEF
from ..pef.evaluate import pef_sign_at
from ..pef.isolate import isolate_roots
from ..pef.times import SymbolicTime
from .intervals import IntervalSet, SymbolicInterval, combine, from_cells, rational_between, sort_times


def _level(f: RealPEF, c: Fraction) -> RealPEF:
    return f - c


def _within(iv, sa: int, sb: int) -> bool:
    """Membership of a value whose signs relative to low and high are sa, sb."""
    lo_ok = sa > 0 or (sa == 0 and iv.low_closed)
    hi_ok = sb < 0 or (sb == 0 and iv.high_closed)
    return lo_ok and hi_ok


class AtomContext:
    """Caches atom satisfaction sets for one chain, initial distribution and horizon."""

    def __init__(self, chain: CTMC, mu, horizon, *, delta=Fraction(1, 2)):
        self.chain = chain
        self.mu = mu
        self.H = Fraction(horizon)
        self.delta = Fraction(delta)
        self._roots: dict = {}
        self._atoms: dict = {}
        self.isolations: list = []  # (label, pef, intervals) for diagnostics

    def trajectory(self, k: int) -> RealPEF:
        return trajectory_pef(self.chain, self.mu, k)

    def roots(self, k: int, c: Fraction) -> list[SymbolicTime]:
        """Symbolic roots of f_k - c in the open window (0, H)."""
        key = (k, c)
        if key not in self._roots:
            g = _level(self.trajectory(k), c)
            if g.is_zero() or self.H == 0:
                out = []
            else:
                ivs = isolate_roots(g, (Fraction(0), self.H), delta=self.delta)
                self.isolations.append((f"P[{k}] - {c}", g, ivs))
                out = [SymbolicTime.at_root(g, iv) for iv in ivs]
            self._roots[key] = out
        return self._roots[key]

    def atom_intervals(self, atom: Atom) -> IntervalSet:
        if atom not in self._atoms:
            self._atoms[atom] = self._compute(atom)
        return self._atoms[atom]

    def _compute(self, atom: Atom) -> IntervalSet:
        k = atom.state_index
        if not 1 <= k <= self.chain.dim:
            raise IndexError(f"atom {atom.render()} refers to state {k}, model has {self.chain.dim}")
        iv = atom.interval
        f = self.trajectory(k)
        fa, fb = _level(f, iv.low), _level(f, iv.high)
        zero, top = SymbolicTime.exact(0), SymbolicTime.exact(self.H)
        ra = self.roots(k, iv.low)
        rb = self.roots(k, iv.high) if iv.high != iv.low else []
        # the value at each boundary point is known exactly
        tagged = [(zero, None), (top, None)] + [(t, "a") for t in ra] + [(t, "b") for t in rb]
        points, index = sort_times([t for t, _ in tagged])
        m = len(points)
        kinds = [None] * m
        for (t, tag), i in zip(tagged, index):
            if tag is not None:
                kinds[i] = tag
        point_in = []
        for i, p in enumerate(points):
            if kinds[i] == "a":
                sb = -1 if iv.high > iv.low else 0
                point_in.append(_within(iv, 0, sb))
            elif kinds[i] == "b":
                point_in.append(_within(iv, 1, 0))
            else:
                x = p.value
                point_in.append(_within(iv, pef_sign_at(fa, x), pef_sign_at(fb, x)))
        gap_in = []
        for i in range(m - 1):
            x = rational_between(points[i], points[i + 1])
            gap_in.append(_within(iv, pef_sign_at(fa, x), pef_sign_at(fb, x)))
        return from_cells(points, point_in, gap_in)

    def whole(self) -> IntervalSet:
        return IntervalSet([SymbolicInterval.closed(0, self.H)])

    def state_intervals(self, cnf) -> IntervalSet:
        """Union over each clause, intersection across clauses."""
        if cnf.is_false:
            return IntervalSet.empty()
        result = self.whole()
        for clause in cnf.clauses:
            sets = [self.atom_intervals(a) for a in clause]
            u = combine(sets, any) if len(sets) > 1 else sets[0]
            result = result.intersect(u)
            if not result:
                break
        return result


def atom_intervals(chain: CTMC, mu, atom: Atom, horizon) -> IntervalSet:
    return AtomContext(chain, mu, horizon).atom_intervals(atom)


def symbolic_path(ctx: AtomContext, atoms) -> list[tuple[SymbolicInterval, frozenset]]:
    """Maximal segments of [0, H] on which the set of satisfied atoms is constant."""
    atoms = list(atoms)
    sets = [ctx.atom_intervals(a) for a in atoms]
    times = [SymbolicTime.exact(0), SymbolicTime.exact(ctx.H)]
    owners = []
    for ai, s in enumerate(sets):
        for iv in s:
            times.extend([iv.low, iv.high])
            owners.append((ai, iv))
    points, index = sort_times(times)
    m = len(points)
    p_sets = [set() for _ in range(m)]
    g_sets = [set() for _ in range(max(m - 1, 0))]
    for n, (ai, iv) in enumerate(owners):
        a, b = index[2 + 2 * n], index[3 + 2 * n]
        if iv.low_closed:
            p_sets[a].add(ai)
        if iv.high_closed:
            p_sets[b].add(ai)
        for j in range(a + 1, b):
            p_sets[j].add(ai)
        for j in range(a, b):
            g_sets[j].add(ai)
    # cells in order: point 0, gap 0, point 1, ...; merge runs with equal sets
    cells = []
    for i in range(m):
        cells.append((i, "point", frozenset(p_sets[i])))
        if i + 1 < m:
            cells.append((i, "gap", frozenset(g_sets[i])))
    segments = []
    start = 0
    for c in range(1, len(cells) + 1):
        if c == len(cells) or cells[c][2] != cells[start][2]:
            first, last = cells[start], cells[c - 1]
            lo, lc = points[first[0]], first[1] == "point"
            if last[1] == "point":
                hi, hc = points[last[0]], True
            else:
                hi, hc = points[last[0] + 1], False
            segments.append((SymbolicInterval(lo, hi, lc, hc),
                             frozenset(atoms[i] for i in cells[start][2])))
            start = c
    return segments
