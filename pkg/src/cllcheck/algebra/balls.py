"""Rigorous complex ball arithmetic on fixed-point integers.

A :class:`Ball` at precision ``p`` stores integers ``re``, ``im`` and ``rad``
and encloses every complex number within ``rad / 2**p`` of
``(re + i*im) / 2**p``.  Every operation returns a ball that contains all
results of the exact operation applied to members of the operand balls.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def _round_div(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0); error at most 1/2."""
    q, r = divmod(num, den)
    if 2 * r >= den:
        q += 1
    return q


def _ceil_div(num: int, den: int) -> int:
    return -((-num) // den)


def _scale(q: Fraction, prec: int) -> tuple[int, int]:
    """Return (m, err) with |q*2**prec - m| <= err, err in {0, 1}."""
    num = q.numerator << prec
    if num % q.denominator == 0:
        return num // q.denominator, 0
    return _round_div(num, q.denominator), 1


def _sqrt_bits(q: Fraction, bits: int) -> int:
    # enough fractional bits for ~``bits`` significant bits of sqrt(q)
    return max(bits, (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + bits)


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """A rational upper bound for sqrt(q), q >= 0, with relative slack ~2**-bits."""
    if q <= 0:
        return Fraction(0)
    bits = _sqrt_bits(q, bits)
    scale = 1 << (2 * bits)
    n = q.numerator * scale
    d = q.denominator
    v = isqrt(_ceil_div(n, d))
    while v * v * d < n:
        v += 1
    return Fraction(v, 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    """A rational lower bound for sqrt(q), q >= 0."""
    if q <= 0:
        return Fraction(0)
    bits = _sqrt_bits(q, bits)
    scale = 1 << (2 * bits)
    v = isqrt((q.numerator * scale) // q.denominator)
    return Fraction(v, 1 << bits)


class Ball:
    """Complex ball ``(re + i*im) / 2**prec`` of radius ``rad / 2**prec``."""

    __slots__ = ("re", "im", "rad", "prec")

    def __init__(self, re: int, im: int, rad: int, prec: int):
        self.re = re
        self.im = im
        self.rad = rad
        self.prec = prec

    # construction -------------------------------------------------------
    @classmethod
    def exact_int(cls, n: int, prec: int) -> "Ball":
        return cls(n << prec, 0, 0, prec)

    @classmethod
    def from_rational(cls, re: Fraction, prec: int, im: Fraction = Fraction(0)) -> "Ball":
        a, ea = _scale(Fraction(re), prec)
        b, eb = _scale(Fraction(im), prec)
        return cls(a, b, ea + eb, prec)

    @classmethod
    def from_disk(cls, re: Fraction, im: Fraction, radius: Fraction, prec: int) -> "Ball":
        """Ball enclosing the closed disk of the given rational center and radius."""
        ball = cls.from_rational(re, prec, im)
        r = Fraction(radius) * (1 << prec)
        ball.rad += _ceil_div(r.numerator, r.denominator)
        return ball

    def copy(self) -> "Ball":
        return Ball(self.re, self.im, self.rad, self.prec)

    def to_prec(self, prec: int) -> "Ball":
        if prec == self.prec:
            return self
        if prec > self.prec:
            s = prec - self.prec
            return Ball(self.re << s, self.im << s, self.rad << s, prec)
        s = self.prec - prec
        d = 1 << s
        return Ball(
            _round_div(self.re, d), _round_div(self.im, d), _ceil_div(self.rad, d) + 1, prec
        )

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Ball":
        if isinstance(other, Ball):
            if other.prec != self.prec:
                return other.to_prec(self.prec)
            return other
        if isinstance(other, int):
            return Ball.exact_int(other, self.prec)
        return Ball.from_rational(Fraction(other), self.prec)

    def __add__(self, other) -> "Ball":
        o = self._coerce(other)
        return Ball(self.re + o.re, self.im + o.im, self.rad + o.rad, self.prec)

    __radd__ = __add__

    def __sub__(self, other) -> "Ball":
        o = self._coerce(other)
        return Ball(self.re - o.re, self.im - o.im, self.rad + o.rad, self.prec)

    def __rsub__(self, other) -> "Ball":
        return self._coerce(other) - self

    def __neg__(self) -> "Ball":
        return Ball(-self.re, -self.im, self.rad, self.prec)

    def _mid_mag(self) -> int:
        """Upper bound on |mid| in units of 2**-prec."""
        return isqrt(self.re * self.re + self.im * self.im) + 1

    def __mul__(self, other) -> "Ball":
        if isinstance(other, int):
            return Ball(self.re * other, self.im * other, self.rad * abs(other), self.prec)
        o = self._coerce(other)
        p = self.prec
        d = 1 << p
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        m1, m2 = self._mid_mag(), o._mid_mag()
        err = m1 * o.rad + m2 * self.rad + self.rad * o.rad
        return Ball(_round_div(re, d), _round_div(im, d), _ceil_div(err, d) + 1, p)

    __rmul__ = __mul__

    def div_int(self, n: int) -> "Ball":
        if n < 0:
            return (-self).div_int(-n)
        return Ball(_round_div(self.re, n), _round_div(self.im, n), _ceil_div(self.rad, n) + 1, self.prec)

    def mul_i(self) -> "Ball":
        return Ball(-self.im, self.re, self.rad, self.prec)

    def conj(self) -> "Ball":
        return Ball(self.re, -self.im, self.rad, self.prec)

    def real_part(self) -> "Ball":
        return Ball(self.re, 0, self.rad, self.prec)

    def mag_upper(self) -> Fraction:
        """Upper bound on |z| for z in the ball."""
        return Fraction(self._mid_mag() + self.rad, 1 << self.prec)

    def mag_lower(self) -> Fraction:
        m = isqrt(self.re * self.re + self.im * self.im) - self.rad
        return Fraction(max(m, 0), 1 << self.prec)

    def exp(self) -> "Ball":
        """Enclosure of exp(z) for z in the ball."""
        p = self.prec
        units = self._mid_mag() + self.rad
        # |z| < 2**(bitlen - p); reduce by 2**s so that |w| <= 1/4
        s = max(0, units.bit_length() - p + 2)
        wp = p + 2 * s + 24
        z = self.to_prec(wp)
        w = Ball(z.re, z.im, z.rad, wp + s).to_prec(wp)
        # Taylor polynomial of degree N - 1 and the tail bound 2*|w|**N/N!
        # with |w| <= 1/4: choose N with 4**-N / N! < 2**-wp
        n_terms = 1
        bound = Fraction(1)
        while bound * (1 << wp) >= 1:
            n_terms += 1
            bound = bound / (4 * n_terms)
        one = Ball.exact_int(1, wp)
        acc = one
        for k in range(n_terms - 1, 0, -1):
            acc = one + (w * acc).div_int(k)
        acc.rad += 2
        for _ in range(s):
            acc = acc * acc
        return acc.to_prec(p)

    # inspection ---------------------------------------------------------
    def real_bounds(self) -> tuple[Fraction, Fraction]:
        d = 1 << self.prec
        return Fraction(self.re - self.rad, d), Fraction(self.re + self.rad, d)

    def imag_bounds(self) -> tuple[Fraction, Fraction]:
        d = 1 << self.prec
        return Fraction(self.im - self.rad, d), Fraction(self.im + self.rad, d)

    def real_sign(self) -> int | None:
        """Sign of the real part when it is constant on the ball, else None."""
        if self.re > self.rad:
            return 1
        if self.re < -self.rad:
            return -1
        return None

    def radius(self) -> Fraction:
        return Fraction(self.rad, 1 << self.prec)

    def mid_real(self) -> Fraction:
        return Fraction(self.re, 1 << self.prec)

    def mid_imag(self) -> Fraction:
        return Fraction(self.im, 1 << self.prec)

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.rad * self.rad

    def __repr__(self) -> str:
        d = float(1 << self.prec) if self.prec < 1000 else 2.0 ** min(self.prec, 1000)
        return f"Ball({self.re / d:.17g}{self.im / d:+.17g}j +/- {self.rad / d:.3g})"
