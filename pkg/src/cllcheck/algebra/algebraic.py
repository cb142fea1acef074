"""Exact complex algebraic numbers as (minimal polynomial, rational disk).

An :class:`AlgebraicNumber` names one root of an irreducible monic rational
polynomial by an open disk that contains that root and no other.  Disks are
certified with the bound ``|z - root| <= n*|P(z)/P'(z)|`` (some root lies in
that disk), combined with pairwise disjointness of all ``n`` disks.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import Poly, QQ, Symbol, resultant

from .balls import Ball, sqrt_lower, sqrt_upper

X = Symbol("x")
_Y = Symbol("y_res")


class DivisionByZero(ZeroDivisionError):
    pass


def qpoly(expr_or_coeffs) -> Poly:
    """A univariate Poly in ``x`` over QQ from an expression or high-to-low coefficients."""
    if isinstance(expr_or_coeffs, Poly):
        return Poly(expr_or_coeffs.as_expr(), X, domain=QQ) if expr_or_coeffs.gens != (X,) \
            else expr_or_coeffs.set_domain(QQ)
    if isinstance(expr_or_coeffs, (list, tuple)):
        return Poly([QQ(Fraction(c).numerator, Fraction(c).denominator) for c in expr_or_coeffs], X, domain=QQ)
    return Poly(expr_or_coeffs, X, domain=QQ)


def _fracs(poly: Poly) -> list[Fraction]:
    """High-to-low coefficients as Fractions."""
    return [Fraction(int(c.numerator), int(c.denominator)) for c in poly.all_coeffs()]


def _cpoly_eval(coeffs: list[Fraction], re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in coeffs:
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _deriv(coeffs: list[Fraction]) -> list[Fraction]:
    n = len(coeffs) - 1
    return [c * (n - k) for k, c in enumerate(coeffs[:-1])]


def _mpf_to_fraction(v) -> Fraction:
    v = mpmath.mpf(v)
    if v == 0:
        return Fraction(0)
    sign, man, exp, _ = v._mpf_
    out = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -out if sign else out


def _newton_radius(coeffs, dcoeffs, re, im) -> Fraction | None:
    """Upper bound on the distance from re+i*im to the nearest root; None if P'(z)=0."""
    n = len(coeffs) - 1
    pr, pi = _cpoly_eval(coeffs, re, im)
    num = pr * pr + pi * pi
    if num == 0:
        return Fraction(0)
    dr, di = _cpoly_eval(dcoeffs, re, im)
    den = dr * dr + di * di
    if den == 0:
        return None
    return n * sqrt_upper(num / den)


def _dist2(a: tuple, b: tuple) -> Fraction:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def _limit_denominator(v: Fraction, bits: int) -> Fraction:
    """Round v to a dyadic with ``bits`` fractional bits (keeps certificates cheap)."""
    s = 1 << bits
    return Fraction(round(v * s), s)


@lru_cache(maxsize=4096)
def _isolate_cached(coeff_key: tuple) -> tuple:
    coeffs = [Fraction(n, d) for n, d in coeff_key]
    n = len(coeffs) - 1
    if n == 1:
        return ((-coeffs[1] / coeffs[0], Fraction(0), Fraction(1)),)
    dco = _deriv(coeffs)
    dps = 30
    while True:
        with mpmath.workdps(dps):
            mp_coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
            try:
                roots = mpmath.polyroots(mp_coeffs, maxsteps=50 + 10 * n, extraprec=3 * dps + 20 * n)
            except mpmath.libmp.libhyper.NoConvergence:
                dps *= 2
                continue
            bits = int(dps * 3.33) + 8
            centers = []
            for r in roots:
                c = mpmath.mpc(r)
                centers.append(
                    (_limit_denominator(_mpf_to_fraction(c.real), bits),
                     _limit_denominator(_mpf_to_fraction(c.imag), bits))
                )
        radii = [_newton_radius(coeffs, dco, re, im) for re, im in centers]
        ok = all(r is not None for r in radii)
        if ok:
            out = []
            for i, ci in enumerate(centers):
                sep2 = None
                for j, cj in enumerate(centers):
                    if i == j:
                        continue
                    d2 = _dist2(ci, cj)
                    if d2 <= 9 * (radii[i] + radii[j]) ** 2:
                        ok = False
                        break
                    sep = sqrt_lower(d2) - radii[j]
                    sep2 = sep if sep2 is None else min(sep2, sep)
                if not ok:
                    break
                eps = 2 * radii[i] if radii[i] > 0 else sep2 / 2
                out.append((ci[0], ci[1], eps))
            if ok:
                return tuple(out)
        dps *= 2
        if dps > 20000:
            raise RuntimeError("root isolation failed to converge")


def isolate_all_roots(poly: Poly) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Certified disks (re, im, radius), one per root of a squarefree rational polynomial."""
    key = tuple((c.numerator, c.denominator) for c in _fracs(poly))
    return list(_isolate_cached(key))


def _sorted_factors(poly: Poly) -> list[Poly]:
    _, facs = poly.factor_list()
    out = []
    for f, _m in facs:
        f = f.monic()
        if f.degree() > 0:
            out.append(f)
    return out


class AlgebraicNumber:
    """One complex root of an irreducible monic ``minpoly``, named by a disk.

    Exactly one root of ``minpoly`` lies in the open disk of radius ``radius``
    around ``re + i*im``.
    """

    __slots__ = ("minpoly", "re", "im", "radius", "_key")

    def __init__(self, minpoly: Poly, re: Fraction, im: Fraction, radius: Fraction):
        self.minpoly = minpoly
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.radius = Fraction(radius)
        self._key = None

    # constructors -------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(qpoly([1, -q]), q, Fraction(0), Fraction(1))

    @classmethod
    def roots_of(cls, poly) -> list["AlgebraicNumber"]:
        """All distinct complex roots of a nonzero rational polynomial."""
        poly = qpoly(poly)
        out = []
        for f in _sorted_factors(poly):
            for re, im, eps in isolate_all_roots(f):
                out.append(cls(f, re, im, eps))
        return out

    @classmethod
    def root_near(cls, poly, re: Fraction, im: Fraction, err: Fraction) -> "AlgebraicNumber":
        """The unique root of ``poly`` within ``err`` of re+i*im (ValueError if not unique)."""
        cands = []
        for f in _sorted_factors(qpoly(poly)):
            for rr, ri, eps in isolate_all_roots(f):
                if _dist2((rr, ri), (re, im)) < (eps + err) ** 2:
                    cands.append(cls(f, rr, ri, eps))
        if len(cands) != 1:
            raise ValueError(f"{len(cands)} roots near the given point")
        return cands[0]

    # basic queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.minpoly.degree()

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        c = _fracs(self.minpoly)
        return -c[1] / c[0]

    def is_real(self) -> bool:
        if self.is_rational():
            return True
        roots = isolate_all_roots(self.minpoly)
        idx = self.root_index()
        re, im, eps = roots[idx]
        # a real root of a real polynomial is its own conjugate
        for j, (r2, i2, e2) in enumerate(roots):
            if _dist2((r2, i2), (re, -im)) < (eps + e2) ** 2:
                return j == idx
        return False

    def root_index(self) -> int:
        """Position of the designated root in the canonical isolation of minpoly."""
        roots = isolate_all_roots(self.minpoly)
        x = self
        while True:
            hits = [j for j, (re, im, eps) in enumerate(roots)
                    if _dist2((re, im), (x.re, x.im)) < (eps + x.radius) ** 2]
            if len(hits) == 1:
                return hits[0]
            x = x.refine(x.radius / 16)

    def key(self) -> tuple:
        if self._key is None:
            coeffs = tuple(_fracs(self.minpoly))
            self._key = (coeffs, self.root_index())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            if isinstance(other, (int, Fraction)):
                return self.is_rational() and self.as_fraction() == other
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        if self.is_rational():
            return f"AlgebraicNumber({self.as_fraction()})"
        return (f"AlgebraicNumber({self.minpoly.as_expr()}, "
                f"~{float(self.re):.6g}{float(self.im):+.6g}i)")

    # refinement ---------------------------------------------------------
    def refine(self, eps) -> "AlgebraicNumber":
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("radius must be positive")
        if self.radius <= eps:
            return self
        if self.is_rational():
            return AlgebraicNumber(self.minpoly, self.re, self.im, eps)
        coeffs = _fracs(self.minpoly)
        dco = _deriv(coeffs)
        bits = max(64, 2 * (eps.denominator.bit_length() - eps.numerator.bit_length()) + 32)
        while True:
            dps = int(bits / 3.3) + 10
            with mpmath.workdps(dps):
                f = lambda z: mpmath.polyval([mpmath.mpf(c.numerator) / c.denominator for c in coeffs], z)
                z0 = mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                                mpmath.mpf(self.im.numerator) / self.im.denominator)
                try:
                    z = mpmath.findroot(f, z0, tol=mpmath.mpf(2) ** (-bits))
                except (ValueError, ZeroDivisionError):
                    z = z0
                z = mpmath.mpc(z)
                re = _limit_denominator(_mpf_to_fraction(z.real), bits)
                im = _limit_denominator(_mpf_to_fraction(z.imag), bits)
            r = _newton_radius(coeffs, dco, re, im)
            if r is not None and 2 * r <= eps:
                d = sqrt_upper(_dist2((re, im), (self.re, self.im)))
                new_eps = min(eps, self.radius - d) if r == 0 else 2 * r
                # the new disk holds a root and sits inside the old one
                if new_eps > 0 and d + new_eps <= self.radius:
                    return AlgebraicNumber(self.minpoly, re, im, new_eps)
            bits *= 2
            if bits > 200000:
                raise RuntimeError("refinement did not converge")

    def ball(self, prec: int) -> Ball:
        x = self.refine(Fraction(1, 1 << (prec + 2)))
        return Ball.from_disk(x.re, x.im, x.radius, prec)

    def approx(self) -> complex:
        x = self.refine(Fraction(1, 1 << 60))
        return complex(float(x.re), float(x.im))

    # arithmetic ---------------------------------------------------------
    def conj(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.minpoly, self.re, -self.im, self.radius)

    def __add__(self, other):
        return alg_arith(self, _lift(other), "add")

    def __radd__(self, other):
        return alg_arith(_lift(other), self, "add")

    def __sub__(self, other):
        return alg_arith(self, _lift(other), "sub")

    def __rsub__(self, other):
        return alg_arith(_lift(other), self, "sub")

    def __mul__(self, other):
        return alg_arith(self, _lift(other), "mul")

    def __rmul__(self, other):
        return alg_arith(_lift(other), self, "mul")

    def __truediv__(self, other):
        return alg_arith(self, _lift(other), "div")

    def __rtruediv__(self, other):
        return alg_arith(_lift(other), self, "div")

    def __neg__(self):
        return alg_arith(AlgebraicNumber.rational(0), self, "sub")


def _lift(v) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    return AlgebraicNumber.rational(v)


def _combined_poly(p: Poly, q: Poly, op: str) -> Poly:
    P = p.as_expr().subs(X, _Y)
    n = q.degree()
    qc = _fracs(q)  # high to low
    if op == "add":
        Q = q.as_expr().subs(X, X - _Y)
    elif op == "sub":
        Q = q.as_expr().subs(X, _Y - X)
    elif op == "mul":
        # y**n * q(x/y)
        Q = sum(QQ.to_sympy(QQ(c.numerator, c.denominator)) * X ** (n - k) * _Y ** k
                for k, c in enumerate(qc))
    else:
        # x = a/b, so b = a/x and x**n * q(a/x) vanishes
        Q = sum(QQ.to_sympy(QQ(c.numerator, c.denominator)) * _Y ** (n - k) * X ** k
                for k, c in enumerate(qc))
    return qpoly(resultant(P, Q, _Y))


def alg_arith(x: AlgebraicNumber, y: AlgebraicNumber, op: str) -> AlgebraicNumber:
    """Exact x (op) y for op in add, sub, mul, div."""
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unknown operation {op!r}")
    if op == "div" and alg_is_zero(y):
        raise DivisionByZero("division by an algebraic zero")
    if x.is_rational() and y.is_rational():
        a, b = x.as_fraction(), y.as_fraction()
        return AlgebraicNumber.rational(
            {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b if b else 0}[op])
    if op == "mul" and (alg_is_zero(x) or alg_is_zero(y)):
        return AlgebraicNumber.rational(0)
    if op == "div" and alg_is_zero(x):
        return AlgebraicNumber.rational(0)
    R = _combined_poly(x.minpoly, y.minpoly, op)
    cands = [AlgebraicNumber(f, re, im, eps)
             for f in _sorted_factors(R) for re, im, eps in isolate_all_roots(f)]
    prec = 64
    while True:
        bx, by = x.ball(prec), y.ball(prec)
        if op == "add":
            b = bx + by
        elif op == "sub":
            b = bx - by
        elif op == "mul":
            b = bx * by
        else:
            b = _ball_div(bx, by)
        if b is not None:
            c = (b.mid_real(), b.mid_imag())
            rad = b.radius()
            cands = [z for z in cands if _dist2((z.re, z.im), c) < (z.radius + rad) ** 2]
            if len(cands) == 1:
                return cands[0]
            # shrink the candidate disks along with the enclosure
            cands = [z.refine(max(rad, Fraction(1, 2**prec))) for z in cands]
        prec *= 2


def _ball_div(a: Ball, b: Ball) -> Ball | None:
    """a / b, or None when b may contain zero."""
    lo = b.mag_lower()
    if lo <= 0:
        return None
    # 1/b = conj(b)/|b|^2: enclose via the center reciprocal plus a radius bound
    p = b.prec
    br, bi = b.mid_real(), b.mid_imag()
    m2 = br * br + bi * bi
    inv_c = Ball.from_rational(br / m2, p, -bi / m2)
    # |1/z - 1/c| <= |z-c| / (|z||c|)
    err = b.radius() / (lo * sqrt_lower(m2))
    inv = Ball.from_disk(inv_c.mid_real(), inv_c.mid_imag(), inv_c.radius() + err, p)
    return a * inv


def alg_is_zero(x: AlgebraicNumber) -> bool:
    return x.is_rational() and x.as_fraction() == 0


def alg_refine(x: AlgebraicNumber, eps) -> AlgebraicNumber:
    return x.refine(eps)


def alg_conj(x: AlgebraicNumber) -> AlgebraicNumber:
    return x.conj()
