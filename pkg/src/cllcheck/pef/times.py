"""Symbolic time instants and their exact comparison.

A time is either an exact rational or "the unique root of a real PEF in a
rational isolating interval", plus a rational offset.

Ordering two times first refines the isolating intervals until they separate.
That loop only terminates if the times differ, so equality is decided
beforehand:

* a rational ``v`` equals a root of ``f`` in ``I`` iff ``f(v) == 0`` exactly
  and ``v`` lies in ``I``;
* a nonzero root of ``f`` is algebraic iff it is a root of the gcd of the
  coefficient polynomials of ``f`` (Lindemann-Weierstrass), and two algebraic
  roots are compared through the gcd of their polynomials, one of them shifted;
* two transcendental roots at offset 0 coincide iff the gcd of the two PEFs
  has a root in the overlap of the intervals;
* transcendental roots never differ by a nonzero rational, and never equal an
  algebraic number (this relies on Schanuel's conjecture).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, symbols

from .core import RealPEF
from .isolate import (IsolatingInterval, isolate_real_polynomial, isolate_roots,
                      real_square_free, refine_isolation)
from .evaluate import pef_sign_at
from .squarefree import coefficient_content, pef_gcd

DEFAULT_BUDGET = 200
QUICK_WIDTH = Fraction(1, 2**40)

_t = symbols("t")


class Undecided(RuntimeError):
    """Refinement budget exhausted before two times could be separated."""


class RootRef:
    """The unique root of ``pef`` in the open interval ``interval``.

    The enclosing interval is refined in place on demand.  Equality is by
    identity; equal roots from different sources are found by compare_times.
    """

    __slots__ = ("pef", "interval", "best", "_class")

    def __init__(self, pef: RealPEF, interval: IsolatingInterval):
        self.pef = real_square_free(pef)
        self.interval = interval
        self.best = interval
        self._class = None

    def refine(self, width: Fraction) -> IsolatingInterval:
        if self.best.width > width:
            self.best = refine_isolation(self.pef, self.best, width)
        return self.best

    def classify(self):
        """("algebraic", p) with p a real polynomial over the field vanishing at
        the root, or ("transcendental", None)."""
        if self._class is None:
            self._class = _classify(self)
        return self._class

    def __repr__(self) -> str:
        return f"root of {self.pef.describe()} in {self.interval!r}"


def _classify(r: RootRef):
    f = r.pef
    iv = r.best
    if iv.low < 0 < iv.high and pef_sign_at(f, 0) == 0:
        return ("algebraic", Poly([1, 0], _t, domain=f.field.dom))
    c = coefficient_content(f)
    if c.degree() >= 1:
        coeffs = tuple(reversed(c.rep.to_list()))
        if isolate_real_polynomial(coeffs, f.field, iv.low, iv.high):
            return ("algebraic", c)
    return ("transcendental", None)


@dataclass(frozen=True)
class SymbolicTime:
    value: Fraction | None = None
    root: RootRef | None = None
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if (self.value is None) == (self.root is None):
            raise ValueError("a symbolic time is either exact or a root")

    @staticmethod
    def exact(v) -> "SymbolicTime":
        return SymbolicTime(value=Fraction(v))

    @staticmethod
    def at_root(pef: RealPEF, interval: IsolatingInterval, offset=0) -> "SymbolicTime":
        return SymbolicTime(root=RootRef(pef, interval), offset=Fraction(offset))

    @property
    def kind(self) -> str:
        return "exact-rational" if self.value is not None else "pef-root"

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def shift(self, c) -> "SymbolicTime":
        c = Fraction(c)
        if self.value is not None:
            return SymbolicTime(value=self.value + c)
        return SymbolicTime(root=self.root, offset=self.offset + c)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        if self.value is not None:
            return self.value, self.value
        b = self.root.best
        return b.low + self.offset, b.high + self.offset

    def refine(self, width) -> tuple[Fraction, Fraction]:
        if self.root is not None:
            self.root.refine(Fraction(width))
        return self.enclosure()

    def approx(self, width=Fraction(1, 10**12)) -> float:
        lo, hi = self.refine(width)
        return float((lo + hi) / 2)

    def render(self) -> str:
        if self.value is not None:
            return str(self.value)
        b = self.root.best
        txt = f"root of {self.root.pef.describe()} in ({b.low},{b.high})"
        if self.offset:
            txt += f" + {self.offset}"
        return txt

    def __repr__(self) -> str:
        return self.render()


def _root_at(r: RootRef, x: Fraction) -> bool:
    return x in r.best and pef_sign_at(r.pef, x) == 0


def _equal(t1: SymbolicTime, t2: SymbolicTime, G: Fraction) -> bool:
    """Exact test t1_base == t2_base + G (offsets already folded into G)."""
    if t1.root is None:
        return _root_at(t2.root, t1.value - G)
    if t2.root is None:
        return _root_at(t1.root, t2.value + G)
    r1, r2 = t1.root, t2.root
    c1, c2 = r1.classify(), r2.classify()
    if c1[0] != c2[0]:
        return False
    I1, I2 = r1.best, r2.best
    lo = max(I1.low, I2.low + G)
    hi = min(I1.high, I2.high + G)
    if lo >= hi:
        return False
    if c1[0] == "algebraic":
        p1, p2 = c1[1], c2[1]
        h = p1.gcd(p2.shift(-G)) if G else p1.gcd(p2)
        if h.degree() < 1:
            return False
        coeffs = tuple(reversed(h.rep.to_list()))
        return bool(isolate_real_polynomial(coeffs, r1.pef.field, lo, hi))
    if G:
        return False
    h = r1.pef if r1.pef == r2.pef else pef_gcd(r1.pef, r2.pef)
    if len(h.terms) == 1 and h.degree() == 0:
        return False
    return bool(isolate_roots(h, (lo, hi)))


_EQ_CACHE: dict = {}


def compare_times(t1: SymbolicTime, t2: SymbolicTime, g=0, *, budget: int | None = None) -> int:
    """Sign (-1, 0, 1) of t1 - t2 - g."""
    g = Fraction(g)
    if budget is None:
        budget = DEFAULT_BUDGET
    if t1.value is not None and t2.value is not None:
        d = t1.value - t2.value - g
        return (d > 0) - (d < 0)
    G = g + t2.offset - t1.offset
    # distinct times usually separate quickly; the exact equality test is
    # only needed when the enclosures keep overlapping
    r = _separate(t1, t2, g, QUICK_WIDTH, budget)
    if r is not None:
        return r
    key = (t1.value, t1.root, t2.value, t2.root, G)
    eq = _EQ_CACHE.get(key)
    if eq is None:
        eq = _equal(t1, t2, G)
        if len(_EQ_CACHE) > 100000:
            _EQ_CACHE.clear()
        _EQ_CACHE[key] = eq
    if eq:
        return 0
    r = _separate(t1, t2, g, Fraction(0), budget)
    if r is None:
        raise Undecided(f"could not separate {t1.render()} and {t2.render()} + {g}")
    return r


def _separate(t1: SymbolicTime, t2: SymbolicTime, g: Fraction, floor: Fraction, budget: int):
    """Refine until the enclosures of t1 and t2 + g are disjoint; None when
    both are narrower than ``floor`` or the budget runs out first."""
    for _ in range(budget):
        a1, b1 = t1.enclosure()
        a2, b2 = t2.enclosure()
        a2, b2 = a2 + g, b2 + g
        if b1 < a2 or b1 == a2 and (t1.root is not None or t2.root is not None):
            return -1
        if b2 < a1 or b2 == a1 and (t1.root is not None or t2.root is not None):
            return 1
        w1, w2 = b1 - a1, b2 - a2
        if max(w1, w2) <= floor:
            return None
        if w1 >= w2:
            t1.refine(w1 / 2)
        else:
            t2.refine(w2 / 2)
    return None
