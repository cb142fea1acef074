"""Abstract syntax of state and path formulas.

Derived connectives are desugared on construction: ``a | b`` is
``!(!a & !b)``, ``a -> b`` is ``!(a & !b)`` and ``false`` is ``!true``.
The smart constructors :func:`pnot` and :func:`pand` fold path-level
connectives over plain state queries into the state formula, so there is a
single AST for every formula the parser accepts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..ctmc import Atom, fmt_rational


# state formulas ------------------------------------------------------------------
@dataclass(frozen=True)
class STrue:
    pass


@dataclass(frozen=True)
class SAtom:
    atom: Atom


@dataclass(frozen=True)
class SNot:
    arg: object


@dataclass(frozen=True)
class SAnd:
    left: object
    right: object


def s_or(a, b):
    return SNot(SAnd(SNot(a), SNot(b)))


def s_implies(a, b):
    return SNot(SAnd(a, SNot(b)))


def s_false():
    return SNot(STrue())


def eval_state(phi, probs) -> bool:
    """Direct recursive evaluation of a state formula on a distribution."""
    if isinstance(phi, STrue):
        return True
    if isinstance(phi, SAtom):
        return phi.atom.holds(probs)
    if isinstance(phi, SNot):
        return not eval_state(phi.arg, probs)
    if isinstance(phi, SAnd):
        return eval_state(phi.left, probs) and eval_state(phi.right, probs)
    raise TypeError(f"not a state formula: {phi!r}")


def state_atoms(phi):
    if isinstance(phi, SAtom):
        yield phi.atom
    elif isinstance(phi, SNot):
        yield from state_atoms(phi.arg)
    elif isinstance(phi, SAnd):
        yield from state_atoms(phi.left)
        yield from state_atoms(phi.right)


# time windows ----------------------------------------------------------------------
@dataclass(frozen=True)
class TimeWindow:
    low: Fraction
    high: Fraction
    low_closed: bool = True
    high_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "low", Fraction(self.low))
        object.__setattr__(self, "high", Fraction(self.high))
        if self.low < 0:
            raise ValueError(f"time window {self.render()} starts before 0")
        if self.low > self.high or (self.low == self.high and not (self.low_closed and self.high_closed)):
            raise ValueError(f"time window {self.render()} is empty")

    def contains(self, t) -> bool:
        return (t > self.low or (self.low_closed and t == self.low)) and \
            (t < self.high or (self.high_closed and t == self.high))

    def render(self) -> str:
        lb = "[" if self.low_closed else "("
        rb = "]" if self.high_closed else ")"
        return f"{lb}{fmt_rational(self.low)},{fmt_rational(self.high)}{rb}"


# path formulas -----------------------------------------------------------------------
@dataclass(frozen=True)
class PTrue:
    pass


@dataclass(frozen=True)
class StateQuery:
    """A state formula used as a path formula: it is checked at time 0."""

    phi: object


@dataclass(frozen=True)
class UntilChain:
    """``phi0 U^{T1} phi1 ... U^{Tn} phin`` with n >= 1."""

    phi0: object
    steps: tuple  # ((TimeWindow, state formula), ...)

    def __post_init__(self):
        if not self.steps:
            raise ValueError("an until chain needs at least one window")

    @property
    def horizon(self) -> Fraction:
        return sum((w.high for w, _ in self.steps), Fraction(0))


@dataclass(frozen=True)
class PNot:
    arg: object


@dataclass(frozen=True)
class PAnd:
    left: object
    right: object


def pnot(a):
    if isinstance(a, StateQuery):
        return StateQuery(SNot(a.phi))
    return PNot(a)


def pand(a, b):
    if isinstance(a, StateQuery) and isinstance(b, StateQuery):
        return StateQuery(SAnd(a.phi, b.phi))
    return PAnd(a, b)


def p_or(a, b):
    return pnot(pand(pnot(a), pnot(b)))


def eventually(window: TimeWindow, phi):
    return UntilChain(STrue(), ((window, phi),))


def globally(window: TimeWindow, phi):
    return PNot(UntilChain(STrue(), ((window, SNot(phi)),)))


def path_atoms(phi):
    if isinstance(phi, StateQuery):
        yield from state_atoms(phi.phi)
    elif isinstance(phi, UntilChain):
        yield from state_atoms(phi.phi0)
        for _, s in phi.steps:
            yield from state_atoms(s)
    elif isinstance(phi, PNot):
        yield from path_atoms(phi.arg)
    elif isinstance(phi, PAnd):
        yield from path_atoms(phi.left)
        yield from path_atoms(phi.right)


def path_horizon(phi) -> Fraction:
    """The largest sum of window suprema over the chains in phi."""
    if isinstance(phi, UntilChain):
        return phi.horizon
    if isinstance(phi, PNot):
        return path_horizon(phi.arg)
    if isinstance(phi, PAnd):
        return max(path_horizon(phi.left), path_horizon(phi.right))
    return Fraction(0)
