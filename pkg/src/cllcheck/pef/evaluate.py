"""Rigorous evaluation, exact sign tests and Lipschitz bounds for PEFs."""

from __future__ import annotations

from fractions import Fraction

from ..algebra.balls import Ball
from .core import PEF, ShiftedPEF, poly_deriv, poly_add, poly_scale

_PREC0 = 64


def _unshift(f, t: Fraction) -> tuple[PEF, Fraction]:
    if isinstance(f, ShiftedPEF):
        return f.base, Fraction(t) + f.shift
    return f, Fraction(t)


def pef_ball(f, t, prec: int) -> Ball:
    """A complex ball containing f(t), computed at working precision ``prec``."""
    f, t = _unshift(f, t)
    K = f.field
    tb = Ball.from_rational(t, prec)
    acc = Ball.exact_int(0, prec)
    for lam, cs in f.terms:
        # polynomial part by Horner
        p = K.ball(cs[-1], prec)
        for c in reversed(cs[:-1]):
            p = p * tb + K.ball(c, prec)
        if lam:
            p = p * (K.ball(lam, prec) * tb).exp()
        acc = acc + p
    return acc


def _bits_for(eps: Fraction) -> int:
    return max(_PREC0, eps.denominator.bit_length() - eps.numerator.bit_length() + 16)


def pef_eval_approx(f, t, eps) -> Fraction:
    """A rational q with |f(t) - q| < eps for a real-valued f."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    prec = _bits_for(eps)
    while True:
        b = pef_ball(f, t, prec)
        if b.radius() < eps:
            return b.mid_real()
        prec *= 2


def is_zero_at(f, t) -> bool:
    """Exact test f(t) == 0 (Lindemann-Weierstrass for t != 0)."""
    f, t = _unshift(f, t)
    K = f.field
    vals = f.coefficients_at(t)
    if t == 0:
        total = K.zero
        for v in vals:
            total = total + v
        return not total
    return all(not v for v in vals)


def pef_sign_at(f, t) -> int:
    """Exact sign (-1, 0, 1) of a real-valued f at rational t."""
    if is_zero_at(f, t):
        return 0
    prec = _PREC0
    while True:
        s = pef_ball(f, t, prec).real_sign()
        if s is not None:
            return s
        prec *= 2
        if prec > 1 << 20:
            raise RuntimeError("sign determination did not converge")


def _exp_upper(x: Fraction) -> Fraction:
    return Ball.from_rational(x, 64).exp().real_bounds()[1]


def _round_up(q: Fraction, bits: int = 40) -> Fraction:
    """A dyadic upper bound of q with limited precision."""
    if q <= 0:
        return Fraction(0)
    e = max(0, bits - (q.numerator.bit_length() - q.denominator.bit_length()))
    s = 1 << e
    num = q.numerator * s
    v = -((-num) // q.denominator)
    return Fraction(v, s)


def lipschitz_bound(f, window) -> Fraction:
    """An upper bound for sup |f'| on the window, so f is M-Lipschitz there."""
    a, b = Fraction(window[0]), Fraction(window[1])
    if isinstance(f, ShiftedPEF):
        base, a, b = f.base, a + f.shift, b + f.shift
    else:
        base = f
    K = base.field
    T = max(abs(a), abs(b))
    total = Fraction(0)
    for lam, cs in base.terms:
        d = poly_add(poly_deriv(cs, K), poly_scale(cs, lam))
        if not d:
            continue
        mag = Fraction(0)
        for j, c in enumerate(d):
            if c:
                mag += K.ball(c, 64).mag_upper() * T ** j
        if lam:
            lo, hi = K.ball(lam, 64).real_bounds()
            top = max(lo * a, lo * b, hi * a, hi * b)
            mag *= _exp_upper(top)
        total += mag
    return _round_up(total)
