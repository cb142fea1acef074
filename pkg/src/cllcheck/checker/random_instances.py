"""Random small model-checking instances for oracle cross-validation."""

from __future__ import annotations

import random
from fractions import Fraction

from ..algebra.matrix import RationalMatrix
from ..ctmc import CTMC, Atom, Distribution, ProbInterval
from ..logic.ast import SAnd, SAtom, SNot, STrue, TimeWindow, UntilChain, s_or


def random_ctmc(rng: random.Random, d: int = 3, max_rate: int = 8, denom: int = 4) -> CTMC:
    rows = []
    for i in range(d):
        r = [Fraction(rng.randint(0, max_rate), denom) if j != i else Fraction(0) for j in range(d)]
        r[i] = -sum(r)
        rows.append(r)
    return CTMC(tuple(f"s{i + 1}" for i in range(d)), RationalMatrix(rows))


def random_distribution(rng: random.Random, d: int = 3, denom: int = 20) -> Distribution:
    cuts = sorted(rng.randint(0, denom) for _ in range(d - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    return Distribution(tuple(Fraction(p, denom) for p in parts))


def random_atom(rng: random.Random, d: int = 3, denom: int = 20) -> Atom:
    a, b = sorted(rng.sample(range(denom + 1), 2))
    return Atom(rng.randint(1, d), ProbInterval(Fraction(a, denom), Fraction(b, denom)))


def random_state(rng: random.Random, d: int = 3, depth: int = 1):
    roll = rng.random()
    if depth == 0 or roll < 0.5:
        return STrue() if rng.random() < 0.1 else SAtom(random_atom(rng, d))
    if roll < 0.65:
        return SNot(random_state(rng, d, depth - 1))
    if roll < 0.85:
        return SAnd(random_state(rng, d, depth - 1), random_state(rng, d, depth - 1))
    return s_or(random_state(rng, d, depth - 1), random_state(rng, d, depth - 1))


def random_window(rng: random.Random, top: int = 5, denom: int = 4) -> TimeWindow:
    a, b = sorted(rng.sample(range(top * denom + 1), 2))
    return TimeWindow(Fraction(a, denom), Fraction(b, denom))


def random_chain(rng: random.Random, d: int = 3, max_depth: int = 2) -> UntilChain:
    n = rng.randint(1, max_depth)
    steps = tuple((random_window(rng), random_state(rng, d)) for _ in range(n))
    return UntilChain(random_state(rng, d), steps)
