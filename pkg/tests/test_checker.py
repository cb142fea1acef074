import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cllcheck.algebra.matrix import RationalMatrix
from cllcheck.checker.atoms import AtomContext, atom_intervals
from cllcheck.checker.intervals import IntervalSet, SymbolicInterval
from cllcheck.checker.oracle import oracle_check
from cllcheck.checker.random_instances import random_chain, random_ctmc, random_distribution
from cllcheck.checker.report import dumps, loads, time_from_record, verdict_record
from cllcheck.checker.until import check_until_chain, model_check
from cllcheck.ctmc import CTMC, Atom, Distribution, ProbInterval
from cllcheck.logic.ast import STrue, TimeWindow, UntilChain
from cllcheck.logic.normal import to_cnf
from cllcheck.logic.parser import parse, parse_state
from cllcheck.pef.times import SymbolicTime

from helpers import LN5_HALF, LN125_HALF


def iv(a, b, lc=True, hc=True):
    return ProbInterval(Fraction(a), Fraction(b), lc, hc)


def approx_set(s):
    return [(round(i.low.approx(), 9), round(i.high.approx(), 9), i.low_closed, i.high_closed) for i in s]


def test_zero_generator_atoms_are_all_or_nothing():
    chain = CTMC(("a", "b"), RationalMatrix([[0, 0], [0, 0]]))
    mu = Distribution((Fraction(1, 4), Fraction(3, 4)))
    assert approx_set(atom_intervals(chain, mu, Atom(2, iv("0.5", 1)), 4)) == [(0, 4, True, True)]
    assert not atom_intervals(chain, mu, Atom(1, iv("0.5", 1)), 4)


def test_two_state_atom_sets(two_state):
    chain, mu = two_state
    up = atom_intervals(chain, mu, Atom(2, iv("0.4", 1)), 3)
    assert approx_set(up) == [(round(LN5_HALF, 9), 3, True, True)]
    down = atom_intervals(chain, mu, Atom(1, iv("0.9", 1)), 3)
    assert approx_set(down) == [(0, round(LN125_HALF, 9), True, True)]
    # the boundary is a root of a PEF, not a rational
    assert not up.intervals[0].low.is_exact


def test_open_atom_excludes_its_boundary(two_state):
    chain, mu = two_state
    s = atom_intervals(chain, mu, Atom(2, iv("0.4", 1, False, True)), 3)
    assert approx_set(s) == [(round(LN5_HALF, 9), 3, False, True)]


def test_state_sets_of_true_and_complements(two_state):
    chain, mu = two_state
    ctx = AtomContext(chain, mu, 3)
    assert approx_set(ctx.state_intervals(to_cnf(STrue()))) == [(0, 3, True, True)]
    phi = parse_state("P[2] in [0.4,1]")
    neg = parse_state("!P[2] in [0.4,1]")
    a = ctx.state_intervals(to_cnf(phi))
    b = ctx.state_intervals(to_cnf(neg))
    assert not a.intersect(b)
    assert approx_set(a.union(b)) == [(0, 3, True, True)]


def test_eventually_has_the_root_as_witness(two_state):
    chain, mu = two_state
    v = check_until_chain(chain, mu, parse("true U[0,3] P[2] in [0.4,1]"))
    assert v.satisfied
    assert abs(v.witness[-1].time.approx() - LN5_HALF) < 1e-9


def test_unreachable_level_is_unsat(two_state):
    chain, mu = two_state
    assert not model_check(chain, mu, parse("true U[0,10] P[2] in [0.6,1]")).satisfied


def test_globally_on_a_short_window(two_state):
    chain, mu = two_state
    assert model_check(chain, mu, parse("G[0,0.1] P[1] in [0.9,1]")).satisfied
    assert not model_check(chain, mu, parse("G[0,0.2] P[1] in [0.9,1]")).satisfied


def test_until_needs_the_left_formula_to_hold(two_state):
    chain, mu = two_state
    # P[1] leaves [0.9,1] at ~0.11, long before P[2] reaches 0.4
    assert not model_check(chain, mu, parse("P[1] in [0.9,1] U[0,3] P[2] in [0.4,1]")).satisfied
    assert model_check(chain, mu, parse("P[1] in [0.5,1] U[0,3] P[2] in [0.4,1]")).satisfied


def test_nested_chain_adds_windows(two_state):
    chain, mu = two_state
    phi = parse("true U[1/2,1/2] true U[0,1] P[2] in [0.4,1]")
    v = model_check(chain, mu, phi)
    assert v.satisfied
    assert abs(v.witness[-1].time.approx() - LN5_HALF) < 1e-9
    assert v.witness[0].time.value == Fraction(1, 2)


def test_state_query_is_read_at_time_zero(two_state):
    chain, mu = two_state
    assert model_check(chain, mu, parse("P[1] in [1,1]")).satisfied
    assert not model_check(chain, mu, parse("P[2] in (0,1]")).satisfied


def test_example_generator_eventually(three_state):
    mu = Distribution((Fraction(1), Fraction(0), Fraction(0)))
    # P[1] decays slowly and is still ~0.9005 at t = 10
    assert not model_check(three_state, mu, parse("F[0,10] P[1] in [0,0.9]")).satisfied
    v = model_check(three_state, mu, parse("F[0,20] P[1] in [0,0.9]"))
    assert v.satisfied and 10 < v.witness[-1].time.approx() < 11
    assert not model_check(three_state, mu, parse("F[0,10] P[2] in [0.9,1]")).satisfied


def test_report_round_trip(two_state):
    chain, mu = two_state
    v = model_check(chain, mu, parse("true U[0,3] P[2] in [0.4,1]"))
    rec = verdict_record(v)
    back = loads(dumps(rec))
    assert back == rec
    assert back["verdict"] == "SAT"
    kind, _, low, high, offset = time_from_record(back["witness"][-1]["time"])
    assert kind == "root" and offset == 0 and low <= Fraction(LN5_HALF) <= high


# interval set algebra against a rational reference ---------------------------------------
@st.composite
def rat_intervals(draw):
    a, b = sorted((draw(st.integers(0, 12)), draw(st.integers(0, 12))))
    lc, hc = draw(st.booleans()), draw(st.booleans())
    if a == b:
        lc = hc = True
    return (Fraction(a, 2), Fraction(b, 2), lc, hc)


def _contains(r, x):
    a, b, lc, hc = r
    return (a < x or (lc and a == x)) and (x < b or (hc and x == b))


def _sym(r):
    a, b, lc, hc = r
    return SymbolicInterval(SymbolicTime.exact(a), SymbolicTime.exact(b), lc, hc)


PROBES = [Fraction(n, 4) for n in range(-2, 28)]


@settings(max_examples=150, deadline=None)
@given(st.lists(rat_intervals(), min_size=1, max_size=4), st.lists(rat_intervals(), min_size=1, max_size=4))
def test_interval_set_algebra(xs, ys):
    A = IntervalSet.of(*map(_sym, xs))
    B = IntervalSet.of(*map(_sym, ys))
    for x in PROBES:
        t = SymbolicTime.exact(x)
        in_a = any(_contains(r, x) for r in xs)
        in_b = any(_contains(r, x) for r in ys)
        assert A.contains(t) == in_a
        assert A.union(B).contains(t) == (in_a or in_b)
        assert A.intersect(B).contains(t) == (in_a and in_b)
    # maximal: consecutive intervals neither overlap nor touch with a closed end
    for u, v in zip(A.intervals, A.intervals[1:]):
        gap = v.low.value - u.high.value
        assert gap > 0 or (gap == 0 and not u.high_closed and not v.low_closed)


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 3), st.integers(0, 3))
def test_enlarging_an_atom_enlarges_its_set(lo, width, dl, dh):
    chain = CTMC(("a", "b"), RationalMatrix([[-1, 1], [2, -2]]))
    mu = Distribution((Fraction(1), Fraction(0)))
    ctx = AtomContext(chain, mu, 4)
    small = Atom(2, iv(Fraction(lo, 20), Fraction(lo + width, 20)))
    big = Atom(2, iv(Fraction(max(lo - dl, 0), 20), Fraction(lo + width + dh, 20)))
    S, T = ctx.atom_intervals(small), ctx.atom_intervals(big)
    for x in [Fraction(n, 16) for n in range(65)]:
        t = SymbolicTime.exact(x)
        if S.contains(t):
            assert T.contains(t)


def _check_witness(chain, mu, formula, verdict):
    ctx = AtomContext(chain, mu, formula.horizon)
    sats = [ctx.state_intervals(to_cnf(p)) for p in [formula.phi0] + [s for _, s in formula.steps]]
    prev = Fraction(0)
    for step, (w, _) in zip(verdict.witness, formula.steps):
        x = step.time
        lo, hi = x.enclosure()
        assert w.low - Fraction(1, 10**6) <= lo - prev and hi - prev <= w.high + Fraction(1, 10**6)
        if step.run is not None and not step.run.is_point():
            a, b = step.run.approx()
            for k in range(1, 8):
                q = SymbolicTime.exact(Fraction(a + (b - a) * k / 8).limit_denominator(10**9))
                if step.run.contains(q):
                    assert sats[step.level - 1].contains(q)
        prev = Fraction(x.enclosure()[0])
    assert sats[-1].contains(verdict.witness[-1].time)


@pytest.mark.parametrize("seed", range(6))
def test_random_instances_agree_with_the_oracle(seed):
    rng = random.Random(1000 + seed)
    chain, mu = random_ctmc(rng), random_distribution(rng)
    formula = random_chain(rng)
    verdict = check_until_chain(chain, mu, formula)
    ref = oracle_check(chain, mu, formula)
    if ref.robust:
        assert verdict.satisfied == ref.verdict
    if verdict.satisfied:
        _check_witness(chain, mu, formula, verdict)


def test_fixed_witness_is_valid(two_state):
    chain, mu = two_state
    phi = UntilChain(parse_state("P[1] in [0.5,1]"),
                     ((TimeWindow(0, 3), parse_state("P[2] in [0.4,1]")),))
    v = check_until_chain(chain, mu, phi)
    _check_witness(chain, mu, phi, v)
    assert math.isclose(v.witness[0].time.approx(), LN5_HALF, abs_tol=1e-9)
