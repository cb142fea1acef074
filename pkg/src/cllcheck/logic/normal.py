"""Normal forms and printing.

``to_cnf`` produces a negation-free conjunctive normal form: a negated atom
``!(P[k] in I)`` becomes the disjunction of the (at most two) atoms on the
complement of I in [0, 1].  ``normalize_path`` pushes path-level negation
down to the leaves, which are until chains or state queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .ast import (PAnd, PNot, PTrue, SAnd, SAtom, SNot, STrue, StateQuery, UntilChain)


# negation-free CNF over atoms -------------------------------------------------------
@dataclass(frozen=True)
class CNF:
    """A conjunction of clauses; each clause is a disjunction of atoms.

    No clauses means true; an empty clause means false.
    """

    clauses: tuple

    @property
    def is_true(self) -> bool:
        return not self.clauses

    @property
    def is_false(self) -> bool:
        return any(not c for c in self.clauses)

    def holds(self, probs) -> bool:
        return all(any(a.holds(probs) for a in c) for c in self.clauses)

    def atoms(self):
        seen = []
        for c in self.clauses:
            for a in c:
                if a not in seen:
                    seen.append(a)
        return seen

    def render(self) -> str:
        if self.is_true:
            return "true"
        parts = []
        for c in self.clauses:
            if not c:
                parts.append("false")
            elif len(c) == 1:
                parts.append(c[0].render())
            else:
                parts.append("(" + " | ".join(a.render() for a in c) + ")")
        return " & ".join(parts)


def _atom_key(a):
    iv = a.interval
    return (a.state_index, iv.low, not iv.low_closed, iv.high, iv.high_closed)


def _clause(atoms) -> tuple:
    uniq = {a: None for a in atoms}
    return tuple(sorted(uniq, key=_atom_key))


def _simplify(clauses) -> tuple:
    out = []
    seen = set()
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    if any(not c for c in out):
        return ((),)
    return tuple(out)


def to_cnf(phi) -> CNF:
    return CNF(_cnf(phi, False))


def _cnf(phi, negated: bool) -> tuple:
    if isinstance(phi, STrue):
        return ((),) if negated else ()
    if isinstance(phi, SAtom):
        if not negated:
            return ((phi.atom,),)
        from ..ctmc import Atom
        comp = phi.atom.interval.complement()
        return (_clause(Atom(phi.atom.state_index, iv) for iv in comp),)
    if isinstance(phi, SNot):
        return _cnf(phi.arg, not negated)
    if isinstance(phi, SAnd):
        a = _cnf(phi.left, negated)
        b = _cnf(phi.right, negated)
        if not negated:
            return _simplify(a + b)
        # !(l & r) = !l | !r: distribute the two CNFs
        if not a or not b:
            return ()
        return _simplify(tuple(_clause(x + y) for x, y in product(a, b)))
    raise TypeError(f"not a state formula: {phi!r}")


# path normalization ----------------------------------------------------------------------
@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Leaf:
    """An until chain or state query, possibly negated."""

    formula: object
    negated: bool = False


@dataclass(frozen=True)
class AllOf:
    items: tuple


@dataclass(frozen=True)
class AnyOf:
    items: tuple


def normalize_path(phi, negated: bool = False):
    """Negation normal form over leaves, with constants folded away."""
    if isinstance(phi, PTrue):
        return Const(not negated)
    if isinstance(phi, PNot):
        return normalize_path(phi.arg, not negated)
    if isinstance(phi, StateQuery):
        if isinstance(phi.phi, STrue):
            return Const(not negated)
        if isinstance(phi.phi, SNot) and isinstance(phi.phi.arg, STrue):
            return Const(negated)
        return Leaf(phi, negated)
    if isinstance(phi, UntilChain):
        return Leaf(phi, negated)
    if isinstance(phi, PAnd):
        parts = [normalize_path(phi.left, negated), normalize_path(phi.right, negated)]
        return _combine(AnyOf if negated else AllOf, parts)
    raise TypeError(f"not a path formula: {phi!r}")


def _combine(kind, parts):
    unit = kind is AllOf  # true is the unit of a conjunction
    items = []
    for p in parts:
        if isinstance(p, Const):
            if p.value != unit:
                return Const(not unit)
            continue
        if isinstance(p, kind):
            items.extend(p.items)
        else:
            items.append(p)
    if not items:
        return Const(unit)
    if len(items) == 1:
        return items[0]
    return kind(tuple(items))


def leaves(tree):
    if isinstance(tree, Leaf):
        yield tree
    elif isinstance(tree, (AllOf, AnyOf)):
        for t in tree.items:
            yield from leaves(t)


def evaluate_tree(tree, leaf_value) -> bool:
    """Evaluate with ``leaf_value(formula) -> bool`` for the un-negated leaf."""
    if isinstance(tree, Const):
        return tree.value
    if isinstance(tree, Leaf):
        return leaf_value(tree.formula) != tree.negated
    if isinstance(tree, AllOf):
        return all(evaluate_tree(t, leaf_value) for t in tree.items)
    if isinstance(tree, AnyOf):
        return any(evaluate_tree(t, leaf_value) for t in tree.items)
    raise TypeError(f"not a normalized tree: {tree!r}")


# printing ---------------------------------------------------------------------------------
def print_state(phi) -> str:
    if isinstance(phi, STrue):
        return "true"
    if isinstance(phi, SAtom):
        return phi.atom.render()
    if isinstance(phi, SNot):
        if isinstance(phi.arg, STrue):
            return "false"
        inner = print_state(phi.arg)
        return "!" + (inner if isinstance(phi.arg, (SAtom, SNot)) else f"({inner})")
    if isinstance(phi, SAnd):
        left = print_state(phi.left)
        right = print_state(phi.right)
        if isinstance(phi.right, SAnd):
            right = f"({right})"
        return f"{left} & {right}"
    raise TypeError(f"not a state formula: {phi!r}")


def print_path(phi) -> str:
    if isinstance(phi, PTrue):
        return "true"
    if isinstance(phi, StateQuery):
        return print_state(phi.phi)
    if isinstance(phi, UntilChain):
        parts = [print_state(phi.phi0)]
        for w, s in phi.steps:
            parts.append(f"U{w.render()}")
            parts.append(print_state(s))
        return " ".join(parts)
    if isinstance(phi, PNot):
        return f"!({print_path(phi.arg)})"
    if isinstance(phi, PAnd):
        left = print_path(phi.left)
        if not isinstance(phi.left, PAnd):
            left = f"({left})"
        return f"{left} & ({print_path(phi.right)})"
    raise TypeError(f"not a path formula: {phi!r}")
