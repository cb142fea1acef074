import functools
import math
from fractions import Fraction

import mpmath
import numpy as np
from sympy import Poly

from cllcheck.algebra.algebraic import X
from cllcheck.algebra.matrix import RationalMatrix
from cllcheck.algebra.numberfield import NumberField, splitting_field
from cllcheck.ctmc import CTMC, Distribution, ProbInterval
from cllcheck.pef.core import PEF, RealPEF

THREE_STATE_Q = RationalMatrix([
    [Fraction(-25, 1000), Fraction(2, 100), Fraction(5, 1000)],
    [Fraction(3, 10), Fraction(-5, 10), Fraction(2, 10)],
    [Fraction(2, 100), Fraction(4, 10), Fraction(-42, 100)],
])


@functools.lru_cache(maxsize=None)
def gaussian():
    """Q(i) and its element i (with positive imaginary part)."""
    K, roots = splitting_field(Poly(X**2 + 1, X))
    i = next(r for r, _ in roots if K.approx(r).imag > 0)
    return K, i


def rationals():
    return NumberField.rationals()


def cos_pef(scale=1):
    """2 cos(scale * t) written as e^{i s t} + e^{-i s t}."""
    K, i = gaussian()
    s = K.rational(scale)
    return RealPEF(PEF(K, [(i * s, (K.one,)), (-i * s, (K.one,))]))


def exp_minus(c, rate=1, field=None):
    """e^{rate t} - c, over Q unless another field is given."""
    K = field or rationals()
    return RealPEF(PEF(K, [(K.rational(rate), (K.one,)), (K.zero, (K.rational(-c),))]))


def poly_pef(*coeffs, field=None):
    K = field or rationals()
    return RealPEF(PEF.polynomial(K, [Fraction(c) for c in coeffs]))


def numeric(f):
    """Vectorised float evaluation of a PEF from float images of its data."""
    K = f.field
    terms = [(K.approx(lam), [K.approx(c) for c in cs]) for lam, cs in f.terms]

    def ev(t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t, dtype=complex)
        for lam, cs in terms:
            p = np.zeros_like(acc)
            for c in reversed(cs):
                p = p * t + c
            acc = acc + p * np.exp(lam * t)
        return acc.real

    return ev


def mp_value(f, t, dps=60):
    """f(t) with mpmath, from tight rational enclosures of the field data."""
    K = f.field
    eps = Fraction(1, 10 ** (dps + 5))
    with mpmath.workdps(dps):
        def elem(c):
            a = K.to_algebraic(c).refine(eps)
            return mpmath.mpc(mpmath.mpf(a.re.numerator) / a.re.denominator,
                              mpmath.mpf(a.im.numerator) / a.im.denominator)
        tt = mpmath.mpf(t.numerator) / t.denominator
        acc = mpmath.mpc(0)
        for lam, cs in f.terms:
            p = mpmath.mpc(0)
            for c in reversed(cs):
                p = p * tt + elem(c)
            acc += p * mpmath.exp(elem(lam) * tt)
        return acc.real


def sign_changes(values, grid):
    """Midpoints of consecutive grid samples where the sign flips."""
    s = np.sign(values)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return (grid[idx] + grid[idx + 1]) / 2


def closed(a, b):
    return ProbInterval(Fraction(a), Fraction(b))


LN5_HALF = math.log(5) / 2
LN125_HALF = math.log(1.25) / 2
