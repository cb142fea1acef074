import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from cllcheck.algebra.matrix import RationalMatrix
from cllcheck.checker.random_instances import random_ctmc, random_distribution
from cllcheck.ctmc import (CTMC, Atom, Distribution, ModelError, ProbInterval, SymbolizedCTMC,
                           model_from_dict, numeric_distribution, symbolize, to_rational,
                           trajectory_pef, trajectory_pefs, validate)
from cllcheck.pef.core import PEF
from cllcheck.pef.evaluate import pef_eval_approx

from helpers import closed


def iv(a, b, lc=True, hc=True):
    return ProbInterval(Fraction(a), Fraction(b), lc, hc)


WORKED_INTERVALS = [iv(0, "0.2", True, False), iv("0.4", "0.4"), iv("0.5", "0.7", False, True),
                   iv("0.3", 1, False, True)]


def test_rationals_from_text():
    assert to_rational("-1/40") == Fraction(-1, 40)
    assert to_rational("0.025") == Fraction(1, 40)
    with pytest.raises(ModelError):
        to_rational("1e-3x")


def test_example_generator_is_valid(three_state):
    assert validate(three_state) == []


def test_row_sum_diagnostic():
    bad = CTMC(("a", "b"), RationalMatrix([[Fraction(-9, 10), 1], [1, -1]]))
    assert "row 1 sums to 1/10" in validate(bad)


def test_negative_rate_diagnostic():
    bad = CTMC(("a", "b"), RationalMatrix([[1, -1], [1, -1]]))
    assert any("negative" in m for m in validate(bad))


def test_interval_list_must_be_nonempty(three_state):
    assert validate(SymbolizedCTMC(three_state, ())) == ["interval list is empty"]


def test_model_from_dict_reports_short_row():
    with pytest.raises(ModelError) as e:
        model_from_dict({"Q": [["-1", "1"], ["1"]], "intervals": [{"low": "0", "high": "1"}]})
    assert e.value.diagnostics == ["row 2 has 1 entries, expected 2"]


def test_symbolization_of_worked_example():
    mu0 = Distribution((Fraction(3, 10), Fraction(3, 10), Fraction(4, 10)))
    mu1 = Distribution((Fraction(0), Fraction(7, 10), Fraction(3, 10)))
    I = WORKED_INTERVALS
    assert symbolize(mu0, I) == {Atom(3, I[1]), Atom(3, I[3])}
    assert symbolize(mu1, I) == {Atom(1, I[0]), Atom(2, I[2]), Atom(2, I[3])}


def test_full_cover_gives_every_state():
    mu = Distribution((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)))
    assert {a.state_index for a in symbolize(mu, [closed(0, 1)])} == {1, 2, 3}


probs = st.lists(st.integers(min_value=0, max_value=10), min_size=3, max_size=3).filter(any)
bounds = st.tuples(st.integers(0, 10), st.integers(0, 10), st.booleans(), st.booleans())


@settings(max_examples=60, deadline=None)
@given(probs, st.lists(bounds, min_size=1, max_size=4), bounds)
def test_symbolize_is_monotone_in_the_interval_set(w, raw, extra):
    mu = Distribution(tuple(Fraction(x, sum(w)) for x in w))

    def mk(b):
        lo, hi, lc, hc = b
        lo, hi = sorted((lo, hi))
        if lo == hi:
            lc = hc = True
        return iv(Fraction(lo, 10), Fraction(hi, 10), lc, hc)

    I = [mk(b) for b in raw]
    assert symbolize(mu, I) <= symbolize(mu, I + [mk(extra)])


def test_zero_generator_gives_constants():
    chain = CTMC(("a", "b"), RationalMatrix([[0, 0], [0, 0]]))
    mu = Distribution((Fraction(1, 4), Fraction(3, 4)))
    f = trajectory_pef(chain, mu, 2)
    assert f == PEF.constant(f.field, Fraction(3, 4))


def test_two_state_closed_form(two_state):
    chain, mu = two_state
    f = trajectory_pef(chain, mu, 1)
    K = f.field
    assert f == PEF(K, [(K.zero, (K.rational(Fraction(1, 2)),)), (K.rational(-2), (K.rational(Fraction(1, 2)),))])


def test_example_trajectory_starts_at_mu(three_state):
    mu = Distribution((Fraction(1), Fraction(0), Fraction(0)))
    assert pef_eval_approx(trajectory_pef(three_state, mu, 1), 0, Fraction(1, 10**30)) == 1
    assert sum(trajectory_pefs(three_state, mu)) - 1 == PEF.zero(trajectory_pef(three_state, mu, 1).field)


def test_numeric_distribution_examples(two_state):
    chain, mu = two_state
    assert numeric_distribution(chain, mu, 0) == [1.0, 0.0]
    x = numeric_distribution(chain, mu, 1)
    assert abs(x[0] - (0.5 + math.exp(-2) / 2)) < 1e-12
    assert abs(sum(x) - 1) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_random_trajectories_match_numeric_oracles(seed):
    rng = random.Random(seed)
    chain, mu = random_ctmc(rng), random_distribution(rng)
    pefs = trajectory_pefs(chain, mu)
    K = pefs[0].field
    assert sum(pefs) - 1 == PEF.zero(K)
    A = np.array([[float(x) for x in r] for r in chain.Q.transpose().rows])
    v = np.array([float(p) for p in mu.probs])
    eps = Fraction(1, 10**10)
    for t in [Fraction(k, 10) for k in range(0, 101, 7)]:
        ref = numeric_distribution(chain, mu, t, eps)
        alt = expm(A * float(t)) @ v
        for i, f in enumerate(pefs):
            val = float(pef_eval_approx(f, t, eps))
            assert abs(val - ref[i]) < 2 * float(eps)
            assert abs(val - alt[i]) < 1e-9
            assert -float(eps) <= val <= 1 + float(eps)
