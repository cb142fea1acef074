"""Polynomial-exponential functions ``sum_k p_k(t) * exp(lambda_k * t)``.

Coefficients and exponents live in one :class:`NumberField`.  A PEF is kept
normalized: exponents are pairwise distinct and no coefficient polynomial is
zero, so two PEFs are equal as functions iff they are equal as term lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from ..algebra.numberfield import NumberField


class DegenerateInputError(ValueError):
    """Raised when an operation needs a PEF that is not identically zero."""


# polynomials over the field as tuples of coefficients, low degree first
def _trim(p: list) -> tuple:
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def poly_add(p: tuple, q: tuple) -> tuple:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else None
        b = q[i] if i < len(q) else None
        out.append(a + b if a is not None and b is not None else (a if b is None else b))
    return _trim(out)


def poly_scale(p: tuple, c) -> tuple:
    if not c:
        return ()
    return _trim([a * c for a in p])


def poly_mul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            v = a * b
            out[i + j] = v if out[i + j] is None else out[i + j] + v
    zero = p[0] - p[0]
    return _trim([zero if v is None else v for v in out])


def poly_deriv(p: tuple, field: NumberField) -> tuple:
    return _trim([p[i] * field.rational(i) for i in range(1, len(p))])


def poly_eval(p: tuple, t: Fraction, field: NumberField):
    acc = field.zero
    tq = field.rational(t)
    for c in reversed(p):
        acc = acc * tq + c
    return acc


class PEF:
    """A normalized polynomial-exponential function over a number field."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: NumberField, terms: Iterable[tuple] = ()):
        """``terms`` is an iterable of (exponent, coefficient tuple low-to-high)."""
        merged: dict[tuple, list] = {}
        for lam, coeffs in terms:
            k = field.key(lam)
            if k in merged:
                merged[k][1] = poly_add(merged[k][1], tuple(coeffs))
            else:
                merged[k] = [lam, _trim(list(coeffs))]
        items = [(lam, c) for k, (lam, c) in sorted(merged.items()) if c]
        self.field = field
        self.terms = tuple(items)
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, field: NumberField) -> "PEF":
        return cls(field, ())

    @classmethod
    def constant(cls, field: NumberField, c) -> "PEF":
        if not isinstance(c, field.dom.dtype):
            c = field.rational(c)
        return cls(field, [(field.zero, (c,))])

    @classmethod
    def polynomial(cls, field: NumberField, coeffs_low_to_high) -> "PEF":
        cs = tuple(c if isinstance(c, field.dom.dtype) else field.rational(c) for c in coeffs_low_to_high)
        return cls(field, [(field.zero, cs)])

    @classmethod
    def exponential(cls, field: NumberField, lam, coeff=1) -> "PEF":
        if not isinstance(coeff, field.dom.dtype):
            coeff = field.rational(coeff)
        return cls(field, [(lam, (coeff,))])

    def _new(self, terms) -> "PEF":
        return PEF(self.field, terms)

    # queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def power(self) -> list:
        """The exponent set."""
        return [lam for lam, _ in self.terms]

    def degree(self) -> int:
        return max((len(c) - 1 for _, c in self.terms), default=-1)

    def coefficient(self, lam) -> tuple:
        for mu, c in self.terms:
            if mu == lam:
                return c
        return ()

    def key(self) -> tuple:
        return tuple((self.field.key(lam), tuple(self.field.key(c) for c in cs))
                     for lam, cs in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PEF):
            return NotImplemented
        return self.field is other.field and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.field), self.key()))
        return self._hash

    def _check(self, other: "PEF"):
        if self.field is not other.field:
            raise ValueError("PEFs over different number fields")

    # ring operations --------------------------------------------------------
    def _lift(self, c) -> "PEF":
        g = PEF.constant(self.field, c)
        if self.field.is_real_elem(g.terms[0][1][0] if g.terms else self.field.zero):
            return RealPEF(g, check=False)
        return g

    def __add__(self, other: "PEF") -> "PEF":
        if not isinstance(other, PEF):
            other = self._lift(other)
        self._check(other)
        return _rewrap(self, other, self._new(self.terms + other.terms))

    __radd__ = __add__

    def __neg__(self) -> "PEF":
        m1 = self.field.rational(-1)
        return _rewrap(self, self, self._new([(lam, poly_scale(c, m1)) for lam, c in self.terms]))

    def __sub__(self, other: "PEF") -> "PEF":
        if not isinstance(other, PEF):
            other = self._lift(other)
        return self + (-other)

    def __rsub__(self, other) -> "PEF":
        return (-self) + other

    def __mul__(self, other) -> "PEF":
        if not isinstance(other, PEF):
            return self.scale(other)
        self._check(other)
        terms = []
        for l1, c1 in self.terms:
            for l2, c2 in other.terms:
                terms.append((l1 + l2, poly_mul(c1, c2)))
        return _rewrap(self, other, self._new(terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PEF":
        out = PEF.constant(self.field, 1)
        if isinstance(self, RealPEF):
            out = RealPEF(out, check=False)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "PEF":
        """Multiply by a field element (or rational)."""
        if not isinstance(c, self.field.dom.dtype):
            c = self.field.rational(c)
        res = self._new([(lam, poly_scale(cs, c)) for lam, cs in self.terms])
        if isinstance(self, RealPEF) and self.field.is_real_elem(c):
            return RealPEF(res, check=False)
        return res

    def shift_exponents(self, mu) -> "PEF":
        """Multiply by exp(mu * t)."""
        return self._new([(lam + mu, cs) for lam, cs in self.terms])

    def derivative(self) -> "PEF":
        terms = []
        for lam, cs in self.terms:
            terms.append((lam, poly_add(poly_deriv(cs, self.field), poly_scale(cs, lam))))
        return _rewrap(self, self, self._new(terms))

    def conj(self) -> "PEF":
        K = self.field
        return self._new([(K.conj(lam), tuple(K.conj(c) for c in cs)) for lam, cs in self.terms])

    def is_real_symbolic(self) -> bool:
        """Conjugate closure: the coefficient of conj(lambda) is the conjugate polynomial."""
        return self.conj() == PEF(self.field, self.terms)

    def coefficients_at(self, t: Fraction) -> list:
        """Exact field values p_k(t) for rational t."""
        return [poly_eval(cs, Fraction(t), self.field) for _, cs in self.terms]

    # display ------------------------------------------------------------------
    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"

    def describe(self, digits: int = 6) -> str:
        if not self.terms:
            return "0"
        parts = []
        K = self.field
        for lam, cs in self.terms:
            poly = []
            for j, c in enumerate(cs):
                if not c:
                    continue
                v = _fmt(K, c, digits)
                mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
                poly.append(f"{v}*{mono}" if mono else v)
            ptxt = " + ".join(poly)
            if len(poly) > 1:
                ptxt = f"({ptxt})"
            if lam:
                parts.append(f"{ptxt}*e^{{{_fmt(K, lam, digits)}t}}")
            else:
                parts.append(ptxt)
        return " + ".join(parts)


def _fmt(K: NumberField, c, digits: int) -> str:
    if K.is_rational_elem(c):
        return str(K.as_fraction(c))
    z = K.approx(c)
    if abs(z.imag) < 10 ** -(digits + 3):
        return f"{z.real:.{digits}g}"
    return f"({z.real:.{digits}g}{z.imag:+.{digits}g}i)"


class RealPEF(PEF):
    """A PEF whose terms are closed under complex conjugation, hence real on R."""

    __slots__ = ()

    def __init__(self, pef: PEF, check: bool = True):
        super().__init__(pef.field, pef.terms)
        if check and not self.is_real_symbolic():
            raise ValueError("PEF is not closed under conjugation")

    def _new(self, terms) -> PEF:
        return PEF(self.field, terms)


def _rewrap(a: PEF, b: PEF, res: PEF) -> PEF:
    if isinstance(a, RealPEF) and isinstance(b, RealPEF):
        return RealPEF(res, check=False)
    return res


class ShiftedPEF:
    """``t -> base(t + shift)`` for a real PEF ``base`` and a rational shift."""

    __slots__ = ("base", "shift")

    def __init__(self, base: RealPEF, shift):
        self.base = base
        self.shift = Fraction(shift)

    @property
    def field(self) -> NumberField:
        return self.base.field

    def derivative(self) -> "ShiftedPEF":
        return ShiftedPEF(self.base.derivative(), self.shift)

    def __repr__(self) -> str:
        return f"ShiftedPEF({self.base.describe()}, shift={self.shift})"
