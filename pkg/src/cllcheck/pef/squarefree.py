"""Multivariate view of PEFs: integral bases, square-free parts and gcds.

Writing every exponent as an integer combination ``sum_i c_i a_i`` of a basis
``a_1..a_n`` turns a PEF into a Laurent polynomial in ``t`` and
``y_i = exp(a_i t)``.  After clearing negative powers by a monomial, sympy's
multivariate square-free part and gcd over the number field apply, and the
result maps back to a PEF with the same real roots.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from sympy import Matrix, Poly, symbols
from sympy.matrices.normalforms import hermite_normal_form

from ..algebra.numberfield import NumberField
from .core import PEF, DegenerateInputError, RealPEF, poly_eval


def integral_basis(field: NumberField, exponents) -> tuple[list, list[list[int]]]:
    """A Z-basis of the lattice generated by ``exponents`` and integer coordinates.

    Returns ``(basis, coords)`` with ``exponents[k] == sum_i coords[k][i] * basis[i]``.
    """
    exponents = list(exponents)
    if not exponents:
        raise ValueError("exponent set must be nonempty")
    n = field.degree
    vecs = []
    for lam in exponents:
        c = field.coeffs(lam)
        vecs.append(c + [Fraction(0)] * (n - len(c)))
    den = lcm(*(c.denominator for v in vecs for c in v)) if vecs else 1
    ivecs = [[int(c * den) for c in v] for v in vecs]
    if all(x == 0 for v in ivecs for x in v):
        return [], [[] for _ in exponents]
    A = Matrix(n, len(ivecs), lambda i, j: ivecs[j][i])
    H = hermite_normal_form(A)
    cols = [list(H.col(j)) for j in range(H.shape[1]) if any(H.col(j))]
    Hb = Matrix(n, len(cols), lambda i, j: cols[j][i])
    # solve Hb * c = v on a set of independent rows
    _, pivots = Hb.T.rref()
    sub = Hb.extract(list(pivots), list(range(len(cols))))
    sub_inv = sub.inv()
    coords = []
    for v in ivecs:
        c = sub_inv * Matrix([v[i] for i in pivots])
        if Hb * c != Matrix(v) or any(not x.is_integer for x in c):
            raise RuntimeError("lattice coordinates are not integral")
        coords.append([int(x) for x in c])
    basis = [field.elem([Fraction(int(x), den) for x in col]) for col in cols]
    return basis, coords


class LatticeView:
    """Shared variables (t, y_1..y_n) for a family of PEFs over one exponent lattice."""

    def __init__(self, field: NumberField, pefs):
        self.field = field
        exps = []
        seen = set()
        for f in pefs:
            for lam in f.power():
                k = field.key(lam)
                if k not in seen:
                    seen.add(k)
                    exps.append(lam)
        if not exps:
            exps = [field.zero]
        self.basis, coords = integral_basis(field, exps)
        self.coords = {field.key(lam): c for lam, c in zip(exps, coords)}
        self.gens = symbols(f"t y1:{len(self.basis) + 1}") if self.basis else (symbols("t"),)
        if not isinstance(self.gens, tuple):
            self.gens = (self.gens,)

    def to_poly(self, f: PEF) -> Poly:
        """Polynomial F with f(t) = F(t, e^{a t}) * e^{shift t}, negative powers cleared."""
        n = len(self.basis)
        mins = [0] * n
        for lam in f.power():
            c = self.coords[self.field.key(lam)]
            mins = [min(m, x) for m, x in zip(mins, c)]
        d = {}
        for lam, cs in f.terms:
            c = self.coords[self.field.key(lam)]
            e = tuple(x - m for x, m in zip(c, mins))
            for j, a in enumerate(cs):
                if a:
                    d[(j,) + e] = a
        return Poly.from_dict(d, *self.gens, domain=self.field.dom)

    def from_poly(self, P: Poly) -> PEF:
        """The PEF P(t, e^{a t}) after removing any monomial factor in the y's."""
        raw = P.rep.to_dict()
        if not raw:
            return PEF.zero(self.field)
        n = len(self.basis)
        mins = [min(m[1 + i] for m in raw) for i in range(n)]
        terms: dict = {}
        K = self.field
        for mono, coeff in raw.items():
            j = mono[0]
            lam = K.zero
            for i in range(n):
                e = mono[1 + i] - mins[i]
                if e:
                    lam = lam + self.basis[i] * K.rational(e)
            key = K.key(lam)
            if key not in terms:
                terms[key] = [lam, {}]
            terms[key][1][j] = coeff
        out = []
        for lam, coeffs in terms.values():
            deg = max(coeffs)
            out.append((lam, tuple(coeffs.get(j, K.zero) for j in range(deg + 1))))
        return PEF(K, out)


def make_real(g: PEF) -> RealPEF:
    """A real PEF with the same roots as g, given conj(g) = c * e^{rho t} * g."""
    K = g.field
    if g.is_real_symbolic():
        return RealPEF(g, check=False)
    cg = g.conj()
    lam0, p0 = g.terms[0]
    for mu, q in cg.terms:
        if len(q) != len(p0):
            continue
        rho = mu - lam0
        c = q[-1] / p0[-1]
        if (g.shift_exponents(rho) * c) == cg:
            break
    else:
        raise RuntimeError("PEF is not a unit multiple of its conjugate")
    half = g.shift_exponents(rho * K.rational(Fraction(1, 2)))
    w = K.one + c
    if not w:
        th = K.theta()
        w = th - K.conj(th)
    res = half.scale(w)
    return RealPEF(res)


def _require_nonzero(f: PEF):
    if f.is_zero():
        raise DegenerateInputError("PEF is identically zero")


def square_free_part(f: PEF) -> PEF:
    """A square-free PEF with the same real roots as f (real if f is real)."""
    _require_nonzero(f)
    if len(f.terms) == 1 and f.degree() == 0:
        lam, cs = f.terms[0]
        g = PEF.constant(f.field, 1)
        return RealPEF(g, check=False) if isinstance(f, RealPEF) else g
    view = LatticeView(f.field, [f])
    P = view.to_poly(f).sqf_part()
    g = view.from_poly(P)
    if isinstance(f, RealPEF):
        return make_real(g)
    return g


def pef_gcd(f1: PEF, f2: PEF) -> PEF:
    """A greatest common divisor of f1 and f2 in the exponential-polynomial ring."""
    _require_nonzero(f1)
    _require_nonzero(f2)
    view = LatticeView(f1.field, [f1, f2])
    G = view.to_poly(f1).gcd(view.to_poly(f2))
    g = view.from_poly(G)
    if isinstance(f1, RealPEF) and isinstance(f2, RealPEF):
        return make_real(g)
    return g


def coefficient_content(f: PEF) -> Poly:
    """Monic gcd in K[t] of all coefficient polynomials of f and their conjugates."""
    _require_nonzero(f)
    K = f.field
    t = symbols("t")
    g = None
    for _, cs in f.terms:
        for poly in (cs, tuple(K.conj(c) for c in cs)):
            p = Poly(list(reversed(poly)), t, domain=K.dom)
            g = p if g is None else g.gcd(p)
    return g.monic()


def poly_as_pef(field: NumberField, p: Poly) -> RealPEF | PEF:
    coeffs = tuple(reversed(p.rep.to_list()))
    g = PEF.polynomial(field, coeffs)
    return RealPEF(g, check=False) if g.is_real_symbolic() else g


__all__ = [
    "integral_basis", "LatticeView", "square_free_part", "pef_gcd", "make_real",
    "coefficient_content", "poly_as_pef", "poly_eval",
]
