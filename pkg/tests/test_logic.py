from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cllcheck.ctmc import Atom, ProbInterval
from cllcheck.logic.ast import (PAnd, PNot, SAnd, SAtom, SNot, STrue, StateQuery, TimeWindow,
                                UntilChain, eval_state, path_horizon)
from cllcheck.logic.normal import (AllOf, AnyOf, Const, Leaf, evaluate_tree, normalize_path,
                                   print_path, print_state, to_cnf)
from cllcheck.logic.parser import ParseError, parse, parse_state


def iv(a, b, lc=True, hc=True):
    return ProbInterval(Fraction(a), Fraction(b), lc, hc)


def atom(k, a, b, lc=True, hc=True):
    return Atom(k, iv(a, b, lc, hc))


def test_single_atom_is_a_state_query():
    assert parse("P[3] in [0.4,0.4]") == StateQuery(SAtom(atom(3, "0.4", "0.4")))


def test_until_chain_windows():
    phi = parse("P[1] in [0,1/2] U[3,9] P[2] in (0.1,1] U(2,7) true")
    assert isinstance(phi, UntilChain)
    (w1, _), (w2, s2) = phi.steps
    assert w1 == TimeWindow(3, 9)
    assert w2 == TimeWindow(2, 7, False, False)
    assert s2 == STrue()
    assert path_horizon(phi) == 16


def test_eventually_and_globally_desugar():
    f = parse("F[0,1000] P[2] in [1,1]")
    assert f == UntilChain(STrue(), ((TimeWindow(0, 1000), SAtom(atom(2, 1, 1))),))
    g = parse("G[0,1] P[1] in [0.9,1]")
    assert g == PNot(UntilChain(STrue(), ((TimeWindow(0, 1), SNot(SAtom(atom(1, "0.9", 1)))),)))


def test_state_connectives_bind_tighter_than_until():
    phi = parse("P[1] in [0,1] & P[2] in [0,1] U[0,1] true")
    assert isinstance(phi, UntilChain)
    assert isinstance(phi.phi0, SAnd)


def test_path_conjunction_of_chains():
    phi = parse("(true U[0,1] P[1] in [0,1]) & !(true U[0,2] P[2] in [0,1])")
    assert isinstance(phi, PAnd) and isinstance(phi.right, PNot)


def test_false_and_implication_desugar():
    assert parse_state("false") == SNot(STrue())
    a, b = SAtom(atom(1, 0, 1)), SAtom(atom(2, 0, 1))
    assert parse_state("P[1] in [0,1] -> P[2] in [0,1]") == SNot(SAnd(a, SNot(b)))


CORPUS = [
    "P[1] in [0,0.2)",
    "!P[2] in (0.5,0.7]",
    "P[1] in [0,1] & !(P[2] in [0,1/3] & P[3] in (1/3,1])",
    "true U[0,3] P[2] in [0.4,0.4]",
    "P[1] in [0,1] U(1,2] P[2] in [0,1] U[0,5) P[3] in [1/2,1]",
    "!(true U[0,1] !P[1] in [0.9,1])",
    "(true U[0,1] P[1] in [0,1]) & (!(P[2] in [0,1] U[2,3] false))",
]


@pytest.mark.parametrize("text", CORPUS)
def test_print_then_parse_round_trips(text):
    phi = parse(text)
    assert parse(print_path(phi)) == phi


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse("P[1] in [0,1] U[0,2 true")
    assert e.value.pos == 20
    assert e.value.pointer().endswith(" " * 20 + "^")
    with pytest.raises(ParseError) as e:
        parse("P[0] in [0,1]")
    assert e.value.pos == 2


def test_unbounded_windows_are_rejected():
    with pytest.raises(ParseError, match="unbounded"):
        parse("true U[0,inf] P[1] in [0,1]")


def test_empty_and_reversed_intervals_are_rejected():
    with pytest.raises(ParseError):
        parse("true U(1,1) P[1] in [0,1]")
    with pytest.raises(ParseError):
        parse("P[1] in [0.7,0.2]")


# negation-free CNF -------------------------------------------------------------------
def test_negated_atom_becomes_its_complement():
    cnf = to_cnf(SNot(SAtom(atom(2, "0.1", "0.9"))))
    assert cnf.clauses == ((atom(2, 0, "0.1", True, False), atom(2, "0.9", 1, False, True)),)


def test_negated_full_interval_is_false():
    assert to_cnf(SNot(SAtom(atom(1, 0, 1)))).is_false


def test_conjunction_gives_two_clauses():
    a, b = atom(1, 0, "0.5"), atom(2, "0.5", 1)
    assert to_cnf(SAnd(SAtom(a), SAtom(b))).clauses == ((a,), (b,))


def test_true_is_the_empty_conjunction():
    assert to_cnf(STrue()).is_true
    assert to_cnf(SNot(STrue())).is_false


def test_complement_examples():
    assert iv(0, 1).complement() == []
    assert iv(0, "0.3", True, False).complement() == [iv("0.3", 1)]
    assert iv("0.3", "0.3").complement() == [iv(0, "0.3", True, False), iv("0.3", 1, False, True)]


# strategies over two states with eighths as endpoints
eighths = st.integers(0, 8).map(lambda n: Fraction(n, 8))


@st.composite
def intervals(draw):
    lo, hi = sorted((draw(eighths), draw(eighths)))
    if lo == hi:
        return ProbInterval(lo, hi)
    return ProbInterval(lo, hi, draw(st.booleans()), draw(st.booleans()))


atoms = st.builds(lambda k, i: SAtom(Atom(k, i)), st.integers(1, 2), intervals())
states = st.recursive(
    st.one_of(atoms, st.just(STrue())),
    lambda sub: st.one_of(st.builds(SNot, sub), st.builds(SAnd, sub, sub)),
    max_leaves=6)
# points on a finer grid hit every endpoint from both sides
dists = st.integers(0, 32).map(lambda n: (Fraction(n, 32), 1 - Fraction(n, 32)))


@settings(max_examples=200, deadline=None)
@given(states, dists)
def test_cnf_preserves_truth(phi, probs):
    assert to_cnf(phi).holds(probs) == eval_state(phi, probs)


@settings(max_examples=200, deadline=None)
@given(intervals(), st.integers(0, 32))
def test_complement_tiles_the_unit_interval(i, n):
    p = Fraction(n, 32)
    hits = [c.contains(p) for c in i.complement()]
    assert sum(hits) + i.contains(p) == 1


@settings(max_examples=100, deadline=None)
@given(states)
def test_state_printing_round_trips(phi):
    assert parse_state(print_state(phi)) == phi


# path normalization ------------------------------------------------------------------
CHAIN = UntilChain(STrue(), ((TimeWindow(0, 1), SAtom(atom(1, 0, "0.5"))),))
OTHER = UntilChain(STrue(), ((TimeWindow(0, 2), SAtom(atom(2, 0, "0.5"))),))


def test_double_negation_cancels():
    assert normalize_path(PNot(PNot(CHAIN))) == Leaf(CHAIN)


def test_true_state_query_folds_away():
    assert normalize_path(PAnd(CHAIN, StateQuery(STrue()))) == Leaf(CHAIN)
    assert normalize_path(PAnd(CHAIN, StateQuery(SNot(STrue())))) == Const(False)


def test_de_morgan_on_chains():
    tree = normalize_path(PNot(PAnd(CHAIN, OTHER)))
    assert tree == AnyOf((Leaf(CHAIN, True), Leaf(OTHER, True)))


def test_nested_conjunctions_flatten():
    tree = normalize_path(PAnd(PAnd(CHAIN, OTHER), CHAIN))
    assert tree == AllOf((Leaf(CHAIN), Leaf(OTHER), Leaf(CHAIN)))


def _eval_path(phi, truth):
    if isinstance(phi, PNot):
        return not _eval_path(phi.arg, truth)
    if isinstance(phi, PAnd):
        return _eval_path(phi.left, truth) and _eval_path(phi.right, truth)
    if isinstance(phi, StateQuery):
        return eval_state(phi.phi, (Fraction(1, 2), Fraction(1, 2)))
    return truth[phi]


paths = st.recursive(
    st.sampled_from([CHAIN, OTHER, StateQuery(STrue()), StateQuery(SNot(STrue()))]),
    lambda sub: st.one_of(st.builds(PNot, sub), st.builds(PAnd, sub, sub)),
    max_leaves=6)


@settings(max_examples=150, deadline=None)
@given(paths, st.booleans(), st.booleans())
def test_normalization_preserves_truth(phi, x, y):
    truth = {CHAIN: x, OTHER: y}

    def leaf_value(f):
        if isinstance(f, StateQuery):
            return _eval_path(f, truth)
        return truth[f]

    assert evaluate_tree(normalize_path(phi), leaf_value) == _eval_path(phi, truth)
