"""A number field Q(theta) with a fixed complex embedding, and splitting fields.

Elements are sympy ``ANP`` values (polynomials in ``theta`` reduced modulo the
minimal polynomial).  sympy supplies the field arithmetic and factorization;
the embedding of ``theta`` into C is tracked by an :class:`AlgebraicNumber`,
so every element has rigorous complex enclosures.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import mpmath
from sympy import CRootOf, Poly, QQ, Symbol
from sympy import AlgebraicNumber as SymAlgebraicNumber
from sympy.polys.matrices import DomainMatrix

from .algebraic import X, AlgebraicNumber, _fracs, qpoly
from .balls import Ball

_T = Symbol("t_field")


def raw_coeffs(p: Poly) -> list:
    """High-to-low coefficients of a univariate Poly as raw domain elements."""
    return p.rep.to_list()


def _q2f(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _f2q(c) -> object:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


class NumberField:
    """Q(theta) where theta is the designated root ``gen`` of ``minpoly``."""

    def __init__(self, minpoly: Poly, gen: AlgebraicNumber):
        minpoly = qpoly(minpoly).monic()
        self.minpoly = minpoly
        self.gen = gen
        self.degree = minpoly.degree()
        if self.degree == 1:
            ext = SymAlgebraicNumber(CRootOf(X, 0))
        else:
            ext = SymAlgebraicNumber(CRootOf(minpoly.as_expr(), 0))
        self.dom = QQ.algebraic_field(ext)
        self._mod = self.dom.mod.to_list()
        if self.degree > 1 and [_q2f(c) / _q2f(self._mod[0]) for c in self._mod] != _fracs(minpoly):
            raise RuntimeError("field modulus does not match the minimal polynomial")
        self._ball_cache: dict = {}
        self._conj_image = None
        self._alg_cache: dict = {}

    @classmethod
    @functools.lru_cache(maxsize=1)
    def rationals(cls) -> "NumberField":
        return cls(qpoly([1, 0]), AlgebraicNumber.rational(0))

    def __repr__(self) -> str:
        if self.degree == 1:
            return "NumberField(QQ)"
        return f"NumberField({self.minpoly.as_expr()}, theta~{self.gen.approx():.6g})"

    # element construction ------------------------------------------------
    def elem(self, coeffs_low_to_high) -> object:
        coeffs = [_f2q(c) for c in coeffs_low_to_high]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) > self.degree:
            # reduce modulo the minimal polynomial
            p = Poly(list(reversed(coeffs)), X, domain=QQ).rem(Poly(self._mod, X, domain=QQ))
            return self.dom.dtype(p.rep.to_list(), self._mod, QQ)
        return self.dom.dtype(list(reversed(coeffs)), self._mod, QQ)

    def rational(self, q) -> object:
        return self.dom.dtype([_f2q(q)] if Fraction(q) != 0 else [], self._mod, QQ)

    @property
    def zero(self):
        return self.dom.zero

    @property
    def one(self):
        return self.dom.one

    def theta(self):
        return self.elem([0, 1]) if self.degree > 1 else self.zero

    def coeffs(self, a) -> list[Fraction]:
        """Coordinates of ``a`` in the power basis, low to high."""
        return [_q2f(c) for c in reversed(a.to_list())]

    def key(self, a) -> tuple:
        return tuple(self.coeffs(a))

    def is_zero(self, a) -> bool:
        return not a

    def is_rational_elem(self, a) -> bool:
        return len(a.to_list()) <= 1

    def as_fraction(self, a) -> Fraction:
        c = self.coeffs(a)
        if len(c) > 1:
            raise ValueError("element is not rational")
        return c[0] if c else Fraction(0)

    # enclosures -----------------------------------------------------------
    def gen_ball(self, prec: int) -> Ball:
        key = ("gen", prec)
        b = self._ball_cache.get(key)
        if b is None:
            b = self.gen.ball(prec + 8).to_prec(prec)
            self._ball_cache[key] = b
        return b

    def ball(self, a, prec: int) -> Ball:
        coeffs = a.to_list()
        if len(coeffs) <= 1:
            return Ball.from_rational(_q2f(coeffs[0]) if coeffs else Fraction(0), prec)
        key = (tuple(coeffs), prec)
        b = self._ball_cache.get(key)
        if b is not None:
            return b
        # extra guard bits absorb the Horner growth
        wp = prec + 8 + 4 * len(coeffs)
        th = self.gen_ball(wp)
        acc = Ball.from_rational(_q2f(coeffs[0]), wp)
        for c in coeffs[1:]:
            acc = acc * th + Ball.from_rational(_q2f(c), wp)
        b = acc.to_prec(prec)
        if len(self._ball_cache) > 200000:
            self._ball_cache.clear()
        self._ball_cache[key] = b
        return b

    def approx(self, a) -> complex:
        b = self.ball(a, 80)
        return complex(float(b.mid_real()), float(b.mid_imag()))

    # conjugation ------------------------------------------------------------
    def conj_image(self):
        """The element conj(theta); the field must be closed under conjugation."""
        if self._conj_image is None:
            if self.degree == 1:
                self._conj_image = self.zero
            else:
                roots = [r for r in self.roots_in_field(self.minpoly)]
                self._conj_image = self._pick_root(roots, lambda p: self.gen_ball(p).conj())
        return self._conj_image

    def _pick_root(self, candidates, target):
        prec = 64
        while True:
            t = target(prec)
            hits = []
            for r in candidates:
                d = self.ball(r, prec) - t
                if d.contains_zero():
                    hits.append(r)
            if len(hits) == 1:
                return hits[0]
            if not hits and prec > 4096:
                raise RuntimeError("no field element matches the requested value")
            prec *= 2

    def conj(self, a):
        if self.degree == 1 or not a:
            return a
        coeffs = a.to_list()
        if len(coeffs) <= 1:
            return a
        c = self.conj_image()
        acc = self.zero
        for q in coeffs:
            acc = acc * c + self.dom.dtype([q], self._mod, QQ)
        return acc

    def is_real_elem(self, a) -> bool:
        return self.conj(a) == a

    def real_sign(self, a) -> int:
        """Exact sign of a real element."""
        if not a:
            return 0
        prec = 64
        while True:
            s = self.ball(a, prec).real_sign()
            if s is not None:
                return s
            prec *= 2

    def compare_key(self, a, b) -> int:
        """Order by (real part, imaginary part) of the embedded values."""
        if a == b:
            return 0
        d = a - b
        dr = d + self.conj(d)  # 2 Re(d), real
        s = self.real_sign(dr)
        if s:
            return s
        di = d - self.conj(d)  # 2i Im(d)
        prec = 64
        while True:
            bi = self.ball(di, prec)
            if bi.im > bi.rad:
                return 1
            if bi.im < -bi.rad:
                return -1
            prec *= 2

    # algebraic numbers -------------------------------------------------------
    def to_algebraic(self, a) -> AlgebraicNumber:
        """The element as a standalone :class:`AlgebraicNumber`."""
        key = self.key(a)
        hit = self._alg_cache.get(key)
        if hit is not None:
            return hit
        if len(key) <= 1:
            res = AlgebraicNumber.rational(key[0] if key else 0)
        else:
            n = self.degree
            basis = [self.elem([0] * j + [1]) for j in range(n)]
            cols = []
            for e in basis:
                v = self.coeffs(a * e)
                cols.append(v + [Fraction(0)] * (n - len(v)))
            rows = [[_f2q(cols[j][i]) for j in range(n)] for i in range(n)]
            cp = DomainMatrix(rows, (n, n), QQ).charpoly()
            char = Poly(cp, X, domain=QQ)
            res = None
            prec = 64
            factors = [f.monic() for f, _ in char.factor_list()[1]]
            while res is None:
                b = self.ball(a, prec)
                cands = []
                for f in factors:
                    for r in AlgebraicNumber.roots_of(f):
                        dr = r.re - b.mid_real()
                        di = r.im - b.mid_imag()
                        if dr * dr + di * di < (r.radius + b.radius()) ** 2:
                            cands.append(r)
                if len(cands) == 1:
                    res = cands[0]
                prec *= 2
        self._alg_cache[key] = res
        return res

    # polynomials over the field ------------------------------------------------
    def poly(self, coeffs_high_to_low, gen=X) -> Poly:
        return Poly([self.dom.convert(c) if not isinstance(c, self.dom.dtype) else c
                     for c in coeffs_high_to_low], gen, domain=self.dom)

    def lift_qpoly(self, p: Poly, gen=X) -> Poly:
        return Poly([self.dom.convert(c) for c in p.all_coeffs()], gen, domain=self.dom)

    def roots_in_field(self, p: Poly) -> list:
        """Distinct roots of a rational or field polynomial that lie in the field."""
        pk = self.lift_qpoly(p) if p.get_domain() == QQ else p
        out = []
        for g, _e in pk.factor_list()[1]:
            if g.degree() == 1:
                g = g.monic()
                out.append(-raw_coeffs(g)[1])
        return out

    def adjoin_root(self, h: Poly) -> tuple["NumberField", object]:
        """Extend by a root of the irreducible ``h`` in K[x].

        Returns the new field and the image of the old generator in it.
        """
        y = Symbol("y_adj")
        m_y = Poly(self.minpoly.as_expr().subs(X, y), y, domain=QQ)
        hcoeffs = raw_coeffs(h.monic())  # high to low, in K
        deg_h = len(hcoeffs) - 1
        cpolys = [Poly(list(c.to_list()) or [0], y, domain=QQ) for c in hcoeffs]
        xp = Poly(X, X, y, domain=QQ)
        yp = Poly(y, X, y, domain=QQ)
        for k in [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5]:
            if self.degree == 1 and k != 0:
                break
            sub = xp - k * yp
            acc = Poly(0, X, y, domain=QQ)
            for j, cp in enumerate(cpolys):
                acc += Poly(cp.as_expr(), X, y, domain=QQ) * sub ** (deg_h - j)
            if self.degree == 1:
                N = Poly(acc.as_expr().subs(y, 0), X, domain=QQ)
            else:
                N = Poly(acc.as_expr(), y, X, domain=QQ).resultant(Poly(m_y.as_expr(), y, X, domain=QQ))
                N = Poly(N.as_expr(), X, domain=QQ)
            if N.degree() == deg_h * self.degree and N.gcd(N.diff(X)).degree() == 0:
                break
        else:
            raise RuntimeError("no separating shift found")
        N = N.monic()
        new_gen = None
        dps = 40
        while new_gen is None:
            with mpmath.workdps(dps):
                approx = self._numeric_root(hcoeffs, dps) + k * self._theta_numeric(dps)
                re, im = _mp_to_frac(approx.real), _mp_to_frac(approx.imag)
            try:
                new_gen = AlgebraicNumber.root_near(N, re, im, Fraction(1, 10 ** (dps // 2)))
            except ValueError:
                dps *= 2
                if dps > 1000:
                    raise
        L = NumberField(N, new_gen)
        # theta_old is the common root of m(y) and h(theta_new - k*y, y) in L
        Y = Poly(y, y, domain=L.dom)
        tnew = Poly([L.theta()], y, domain=L.dom)
        sub = tnew - k * Y
        acc = Poly(0, y, domain=L.dom)
        for j, cp in enumerate(cpolys):
            cy = Poly([L.dom.convert(c) for c in cp.all_coeffs()], y, domain=L.dom)
            acc += cy * sub ** (deg_h - j)
        my = Poly([L.dom.convert(c) for c in m_y.all_coeffs()], y, domain=L.dom)
        g = acc.gcd(my).monic()
        if g.degree() != 1:
            raise RuntimeError("could not express the old generator")
        old_theta = -raw_coeffs(g)[1]
        return L, old_theta

    def _theta_numeric(self, dps: int = 40):
        with mpmath.workdps(dps):
            b = self.gen_ball(int(dps * 3.4) + 10)
            return mpmath.mpc(_frac_to_mp(b.mid_real()), _frac_to_mp(b.mid_imag()))

    def _numeric_root(self, hcoeffs, dps: int = 40):
        with mpmath.workdps(dps):
            vals = []
            for c in hcoeffs:
                b = self.ball(c, int(dps * 3.4) + 10)
                vals.append(mpmath.mpc(_frac_to_mp(b.mid_real()), _frac_to_mp(b.mid_imag())))
            roots = mpmath.polyroots(vals, maxsteps=200, extraprec=4 * dps)
            return mpmath.mpc(roots[0])


def _frac_to_mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _mp_to_frac(v) -> Fraction:
    v = mpmath.mpf(v)
    sign, man, exp, _ = v._mpf_
    if not man:
        return Fraction(0)
    out = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -out if sign else out


def splitting_field(poly) -> tuple[NumberField, list[tuple[object, int]]]:
    """Splitting field of a rational polynomial and its roots with multiplicities."""
    poly = qpoly(poly)
    _, qfacs = poly.factor_list()
    K = NumberField.rationals()
    while True:
        roots: list[tuple[object, int]] = []
        pending = None
        for f, m in qfacs:
            for g, e in K.lift_qpoly(f).factor_list()[1]:
                if g.degree() == 1:
                    g = g.monic()
                    roots.append((-raw_coeffs(g)[1], m * e))
                else:
                    pending = g
                    break
            if pending is not None:
                break
        if pending is None:
            return K, roots
        K, _ = K.adjoin_root(pending)
