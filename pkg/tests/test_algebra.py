import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cllcheck.algebra.algebraic import (AlgebraicNumber, DivisionByZero, X, alg_arith, alg_conj,
                                        alg_is_zero, alg_refine)
from cllcheck.algebra.matrix import RationalMatrix, char_poly, eigenvalues, jordan_decompose

from helpers import THREE_STATE_Q


SQRT2 = AlgebraicNumber.root_near(X**2 - 2, Fraction(1414, 1000), Fraction(0), Fraction(1, 100))
SQRT3 = AlgebraicNumber.root_near(X**2 - 3, Fraction(1732, 1000), Fraction(0), Fraction(1, 100))
I = AlgebraicNumber.root_near(X**2 + 1, Fraction(0), Fraction(1), Fraction(1, 10))


def test_additive_inverse_is_zero():
    assert alg_is_zero(alg_arith(SQRT2, -SQRT2, "add"))
    assert alg_is_zero(alg_arith(SQRT2, SQRT2, "sub"))


def test_sqrt2_squared_is_rational_two():
    r = alg_arith(SQRT2, SQRT2, "mul")
    assert r.is_rational() and r.as_fraction() == 2
    assert r.minpoly.as_expr() == X - 2


def test_sum_of_square_roots():
    r = alg_arith(SQRT2, SQRT3, "add")
    assert r.minpoly.as_expr() == X**4 - 10 * X**2 + 1
    with mpmath.workdps(40):
        assert abs(r.approx().real - float(mpmath.sqrt(2) + mpmath.sqrt(3))) < 1e-12
    assert abs(r.approx().real - 3.1463) < 1e-4


def test_division_by_zero_raises():
    with pytest.raises(DivisionByZero):
        alg_arith(SQRT2, alg_arith(SQRT2, SQRT2, "sub"), "div")


def test_zero_tests():
    assert alg_is_zero(AlgebraicNumber.rational(0))
    assert not alg_is_zero(SQRT2)


def test_refine_sqrt2():
    r = alg_refine(SQRT2, Fraction(1, 10**6))
    assert r.radius <= Fraction(1, 10**6)
    assert abs(r.re - Fraction(141421356237, 10**11)) < Fraction(1, 10**6)


def test_refine_rational_is_fixed():
    r = alg_refine(AlgebraicNumber.rational(Fraction(3, 2)), Fraction(1, 10**9))
    assert r.re == Fraction(3, 2) and r.im == 0


def test_refine_imaginary_unit():
    r = alg_refine(I, Fraction(1, 1000))
    assert (r.re, r.im) == (0, 1)


def test_conjugation():
    assert alg_conj(I) == -I
    assert alg_conj(SQRT2) == SQRT2
    z = AlgebraicNumber.root_near(X**2 - 2 * X + 5, Fraction(1), Fraction(2), Fraction(1, 10))
    w = alg_conj(z)
    assert abs(w.approx() - complex(1, -2)) < 1e-12
    for v in (z.approx(), w.approx()):
        assert abs(v * v - 2 * v + 5) < 1e-9


def test_char_poly_examples():
    assert char_poly(RationalMatrix([[0, 0], [0, 0]])).as_expr() == X**2
    assert char_poly(RationalMatrix([[1, 0], [0, 1]])).as_expr().expand() == ((X - 1) ** 2).expand()
    p = char_poly(THREE_STATE_Q)
    assert p.degree() == 3 and p.eval(0) == 0


def test_eigenvalues_examples():
    assert any(alg_is_zero(lam) for lam, _ in eigenvalues(THREE_STATE_Q))
    two = sorted(lam.as_fraction() for lam, _ in eigenvalues(RationalMatrix([[-1, 1], [1, -1]])))
    assert two == [-2, 0]
    rot = eigenvalues(RationalMatrix([[0, -1], [1, 0]]))
    assert sorted(round(lam.approx().imag) for lam, _ in rot) == [-1, 1]
    assert all(lam.minpoly.as_expr() == X**2 + 1 for lam, _ in rot)


def _exact_reconstruction(M):
    jd = jordan_decompose(M)
    K = jd.field
    R = jd.reconstruct().to_list()
    return all(K.is_zero(R[i][j] - K.rational(M[i, j])) for i in range(M.dim) for j in range(M.dim))


def test_jordan_diagonal_is_identity_change_of_basis():
    jd = jordan_decompose(RationalMatrix([[2, 0], [0, 3]]))
    K = jd.field
    P = jd.P.to_list()
    assert all(K.is_zero(P[i][j] - (K.one if i == j else K.zero)) for i in range(2) for j in range(2))
    assert sorted(K.as_fraction(lam) for lam, _ in jd.blocks) == [2, 3]


def test_jordan_nilpotent_block():
    jd = jordan_decompose(RationalMatrix([[0, 1], [0, 0]]))
    assert len(jd.blocks) == 1
    lam, size = jd.blocks[0]
    assert size == 2 and jd.field.is_zero(lam)
    assert _exact_reconstruction(RationalMatrix([[0, 1], [0, 0]]))


def test_jordan_example_generator():
    assert _exact_reconstruction(THREE_STATE_Q)


def test_jordan_defective_three_by_three():
    M = RationalMatrix([[-1, 1, 0], [0, -1, 1], [0, 0, -1]])
    jd = jordan_decompose(M)
    assert [s for _, s in jd.blocks] == [3]
    assert _exact_reconstruction(M)


def _random_generator(rng, d=3):
    rows = []
    for i in range(d):
        r = [Fraction(rng.randint(0, 6), rng.choice([1, 2, 3, 4])) if j != i else Fraction(0)
             for j in range(d)]
        r[i] = -sum(r)
        rows.append(r)
    return RationalMatrix(rows)


@pytest.mark.parametrize("seed", range(5))
def test_rate_matrices_have_zero_eigenvalue_and_exact_jordan(seed):
    M = _random_generator(random.Random(seed))
    assert any(alg_is_zero(lam) for lam, _ in eigenvalues(M))
    assert _exact_reconstruction(M)
    p = char_poly(M)
    for lam, _ in eigenvalues(M):
        # substitute through the minimal polynomial: it divides the char poly
        assert p.rem(lam.minpoly).is_zero


# field axioms on small quadratic and rational numbers
POOL = [SQRT2, SQRT3, I, AlgebraicNumber.rational(Fraction(3, 2)), AlgebraicNumber.rational(-2)]
elems = st.sampled_from(POOL)


@settings(max_examples=15, deadline=None)
@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    def diff_zero(a, b):
        return alg_is_zero(alg_arith(a, b, "sub"))

    assert diff_zero(alg_arith(alg_arith(x, y, "add"), z, "add"), alg_arith(x, alg_arith(y, z, "add"), "add"))
    left = alg_arith(x, alg_arith(y, z, "add"), "mul")
    right = alg_arith(alg_arith(x, y, "mul"), alg_arith(x, z, "mul"), "add")
    assert diff_zero(left, right)
    assert diff_zero(alg_arith(alg_arith(x, y, "div"), y, "mul"), x)


@settings(max_examples=10, deadline=None)
@given(elems, st.lists(st.integers(min_value=4, max_value=40), min_size=2, max_size=4))
def test_refinement_keeps_the_root(x, exps):
    disks = [alg_refine(x, Fraction(1, 2**e)) for e in sorted(exps)]
    for a in disks:
        for b in disks:
            d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
            assert d2 <= (a.radius + b.radius) ** 2
