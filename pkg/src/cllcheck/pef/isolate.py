"""Real-root isolation of real PEFs on a bounded window.

The isolator builds a chain ``S_0, S_1, ..., S_m``:

* ``S_0`` is the square-free part of the input;
* ``S_{k+1}`` is the square-free part of ``d/dt (S_k * exp(-lam_k t))``, where
  ``lam_k`` is 0 when 0 is an exponent of ``S_k`` and otherwise a real
  exponent of ``S_k`` (multiplying by ``exp(-lam t)`` keeps the roots, and a
  real ``lam`` keeps the function real so Rolle's theorem applies);
* the chain stops at a single-exponent function ``p(t) exp(mu t)`` (isolated
  by Descartes bisection on ``p``) or at a function whose exponents are all
  non-real (isolated by certified subdivision).

Roots are then lifted back up: between consecutive roots of ``S_{k+1}`` the
function ``S_k exp(-lam_k t)`` is monotone, so each gap holds a root of
``S_k`` iff the signs at its ends differ.  Isolating intervals of
``S_{k+1}`` are first shrunk until ``exist_root`` certifies that ``S_k`` has
no root in them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .core import PEF, DegenerateInputError, RealPEF, poly_eval
from .evaluate import lipschitz_bound, pef_ball, pef_sign_at
from .exist import ExistDepthExceeded, exist_root
from .squarefree import square_free_part

MAX_CHAIN = 40
DEFAULT_DELTA = Fraction(1, 2)


@dataclass(frozen=True)
class IsolatingInterval:
    low: Fraction
    high: Fraction

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError("isolating interval needs low < high")

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    def __contains__(self, x) -> bool:
        return self.low < x < self.high

    def __repr__(self) -> str:
        return f"({self.low}, {self.high})"


@dataclass
class ChainLink:
    pef: RealPEF
    stripped: object  # exponent removed before differentiating, or None at the end
    kind: str  # "link", "polynomial", "oscillatory" or "constant"


@dataclass
class IsolationReport:
    chain: list = dc_field(default_factory=list)
    window: tuple = ()
    intervals: list = dc_field(default_factory=list)

    def lines(self) -> list[str]:
        out = []
        K = None
        for k, link in enumerate(self.chain):
            K = link.pef.field
            extra = ""
            if link.stripped is not None and link.stripped:
                extra = f"   [times e^{{-({_approx(K, link.stripped)})t}} then d/dt]"
            elif link.stripped is not None:
                extra = "   [d/dt]"
            out.append(f"S_{k} ({link.kind}): {link.pef.describe()}{extra}")
        return out


def _approx(K, c) -> str:
    z = K.approx(c)
    return f"{z.real:.6g}" if abs(z.imag) < 1e-12 else f"{z.real:.6g}{z.imag:+.6g}i"


_SQF_CACHE: dict = {}


def real_square_free(f: PEF) -> RealPEF:
    hit = _SQF_CACHE.get(f)
    if hit is None:
        if not isinstance(f, RealPEF):
            f = RealPEF(f)
        hit = square_free_part(f)
        if len(_SQF_CACHE) > 5000:
            _SQF_CACHE.clear()
        _SQF_CACHE[f] = hit
    return hit


# chain construction -----------------------------------------------------------
_CHAIN_CACHE: dict = {}


def build_chain(S0: RealPEF) -> list[ChainLink]:
    hit = _CHAIN_CACHE.get(S0)
    if hit is not None:
        return hit
    K = S0.field
    chain = []
    S = S0
    while True:
        power = S.power()
        if len(power) == 1:
            kind = "constant" if S.degree() == 0 else "polynomial"
            chain.append(ChainLink(S, None, kind))
            break
        if len(chain) >= MAX_CHAIN:
            chain.append(ChainLink(S, None, "oscillatory"))
            break
        if any(not lam for lam in power):
            lam = K.zero
        else:
            reals = [lam for lam in power if K.is_real_elem(lam)]
            if not reals:
                chain.append(ChainLink(S, None, "oscillatory"))
                break
            lam = reals[0]
        chain.append(ChainLink(S, lam, "link"))
        g = S.shift_exponents(-lam) if lam else S
        S = real_square_free(RealPEF(g.derivative(), check=False))
    _CHAIN_CACHE[S0] = chain
    return chain


# polynomial isolation by Descartes bisection over the field --------------------
def _taylor_shift(p: list, c, K) -> list:
    p = list(p)
    n = len(p)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            p[j] = p[j] + c * p[j + 1]
    return p


def _scale_var(p: list, s, K) -> list:
    out = []
    acc = K.one
    for c in p:
        out.append(c * acc)
        acc = acc * s
    return out


def _sign_variations(p: list, K) -> int:
    signs = [K.real_sign(c) for c in p]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _descartes_count(p: tuple, a: Fraction, b: Fraction, K) -> int:
    """Sign-variation bound for the number of roots of p in (a, b)."""
    q = _taylor_shift(list(p), K.rational(a), K)
    q = _scale_var(q, K.rational(b - a), K)
    q = list(reversed(q))
    q = _taylor_shift(q, K.one, K)
    return _sign_variations(q, K)


def _real_sign_elem(K, c) -> int:
    return K.real_sign(c)


def isolate_real_polynomial(p: tuple, K, lo: Fraction, hi: Fraction) -> list:
    """Roots of the real square-free polynomial p in (lo, hi).

    Returns items ``("interval", a, b)``: open intervals with exactly one
    root and nonzero endpoint values.  ``p(lo)`` and ``p(hi)`` must be nonzero.
    """
    f = None
    items = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes_count(p, a, b, K)
        if v == 0:
            continue
        if v == 1:
            items.append(("interval", a, b))
            continue
        m = (a + b) / 2
        if not poly_eval(p, m, K):
            f = f or RealPEF(PEF.polynomial(K, p), check=False)
            u, v = _root_neighbourhood(f, m, a, b)
            items.append(("interval", u, v))
            stack.append((v, b))
            stack.append((a, u))
            continue
        stack.append((m, b))
        stack.append((a, m))
    items.sort(key=lambda it: it[1])
    return items


# oscillatory base case by certified subdivision ----------------------------------
def _subdivide(S: RealPEF, lo: Fraction, hi: Fraction) -> list:
    d1 = S.derivative()
    M1 = lipschitz_bound(S, (lo, hi))
    M2 = lipschitz_bound(d1, (lo, hi))
    items = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        m = (a + b) / 2
        w = (b - a) / 2
        prec = 64
        # no root when |S(m)| exceeds the Lipschitz envelope
        lo_v, hi_v = pef_ball(S, m, prec).real_bounds()
        if lo_v > M1 * w or hi_v < -M1 * w:
            continue
        lo_d, hi_d = pef_ball(d1, m, prec).real_bounds()
        if lo_d > M2 * w or hi_d < -M2 * w:
            # monotone on [a, b]
            if pef_sign_at(S, a) * pef_sign_at(S, b) < 0:
                items.append(("interval", a, b))
            continue
        if pef_sign_at(S, m) == 0:
            u, v = _root_neighbourhood(S, m, a, b)
            items.append(("interval", u, v))
            stack.append((v, b))
            stack.append((a, u))
            continue
        stack.append((m, b))
        stack.append((a, m))
    items.sort(key=lambda it: it[1])
    return items


def _root_neighbourhood(S, m: Fraction, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """(u, v) inside (a, b) around the root m of S with no other root of S in [u, v]."""
    chain = [ChainLink(S, None, "")]
    return (_clear_endpoint(chain, m, a, DEFAULT_DELTA),
            _clear_endpoint(chain, m, b, DEFAULT_DELTA))


# lifting -------------------------------------------------------------------------
EXIST_DEPTH = 8
EXIST_SAMPLES = 256


def _no_root(S, a: Fraction, b: Fraction, delta: Fraction) -> bool:
    """True only if S certainly has no root in [a, b] (endpoints nonzero).

    False means "not certified": the caller shrinks the interval and asks
    again, so a cheap inconclusive answer is always safe.
    """
    m = (a + b) / 2
    M = lipschitz_bound(S, (a, b))
    lo_v, hi_v = pef_ball(S, m, 64).real_bounds()
    w = (b - a) / 2
    if lo_v > M * w or hi_v < -M * w:
        return True
    if pef_sign_at(S, a) != pef_sign_at(S, b):
        return False
    try:
        return not exist_root(S, (a, b), delta, lipschitz=M, max_depth=EXIST_DEPTH,
                              max_samples=EXIST_SAMPLES)
    except ExistDepthExceeded:
        return False


def _single_extremum_clear(S, lam, u: Fraction, l: Fraction) -> bool:
    """g = S e^{-lam t} has one critical point in (u, l).  When g(u), g(l) share
    a sign and g first moves away from zero, that extremum points away from
    zero and g keeps its sign on [u, l]."""
    su, sl = pef_sign_at(S, u), pef_sign_at(S, l)
    if su == 0 or su != sl:
        return False
    D = S.derivative()
    if lam:
        D = D - S.scale(lam)
    return pef_sign_at(D, u) == su


def _lift(S: RealPEF, below: RealPEF, items: list, lo: Fraction, hi: Fraction,
          delta: Fraction, lam=None) -> list:
    """Isolate roots of S in (lo, hi) from the roots of the next chain member."""
    bounds = []
    for _, u, l in items:
        su = pef_sign_at(below, u)
        while True:
            if pef_sign_at(S, u) != 0 and pef_sign_at(S, l) != 0 and (
                    _single_extremum_clear(S, lam, u, l) or _no_root(S, u, l, delta)):
                break
            m = (u + l) / 2
            sm = pef_sign_at(below, m)
            if sm == 0:
                u = l = m
                if pef_sign_at(S, m) == 0:
                    raise RuntimeError(f"unexpected multiple root at {m}")
                break
            if su * sm < 0:
                l = m
            else:
                u = m
                su = sm
        bounds.append((u, l))
    out = []
    left = lo
    s_left = pef_sign_at(S, lo)
    for u, l in bounds + [(hi, hi)]:
        s_right = pef_sign_at(S, u)
        if s_left * s_right < 0:
            out.append(("interval", left, u))
        left = l
        s_left = pef_sign_at(S, l)
    return out


# endpoint handling -------------------------------------------------------------------
def _clear_endpoint(chain: list, x: Fraction, toward: Fraction, delta: Fraction) -> Fraction:
    """A point y strictly between x and ``toward`` such that S_0 has no root in
    (x, y] (or [y, x)) and no chain member vanishes at y."""
    S0 = chain[0].pef
    if all(pef_sign_at(link.pef, x) != 0 for link in chain):
        return x
    direction = 1 if toward > x else -1
    eta = abs(toward - x) / 4
    if pef_sign_at(S0, x) == 0:
        # first nonvanishing derivative at x bounds the root-free neighbourhood
        d = S0
        for _ in range(64):
            d = d.derivative()
            if pef_sign_at(d, x) != 0:
                break
        else:
            raise RuntimeError(f"could not find a nonvanishing derivative at {x}")
        val = abs(_value_lower(d, x))
        while True:
            lo, hi = sorted((x, x + direction * eta))
            if val > lipschitz_bound(d, (lo, hi)) * eta:
                break
            eta /= 2
    else:
        while True:
            lo, hi = sorted((x, x + direction * eta))
            if pef_sign_at(S0, x + direction * eta) != 0 and _no_root(S0, lo, hi, delta):
                break
            eta /= 2
    y = x + direction * eta
    while any(pef_sign_at(link.pef, y) == 0 for link in chain):
        eta = eta * 2 / 3
        y = x + direction * eta
    return y


def _value_lower(f, x: Fraction) -> Fraction:
    """A rational lower bound for |f(x)| with f(x) != 0."""
    prec = 64
    while True:
        lo, hi = pef_ball(f, x, prec).real_bounds()
        if lo > 0:
            return lo
        if hi < 0:
            return -hi
        prec *= 2


def _isolate_side(chain: list, B: Fraction, C: Fraction, delta: Fraction) -> tuple[list, Fraction, Fraction]:
    Bp = _clear_endpoint(chain, B, (B + C) / 2, delta)
    Cp = _clear_endpoint(chain, C, (Bp + C) / 2, delta)
    last = chain[-1]
    if last.kind == "constant":
        items = []
    elif last.kind == "polynomial":
        (_, p), = last.pef.terms
        items = isolate_real_polynomial(p, last.pef.field, Bp, Cp)
    else:
        items = _subdivide(last.pef, Bp, Cp)
    for k in range(len(chain) - 2, -1, -1):
        items = _lift(chain[k].pef, chain[k + 1].pef, items, Bp, Cp, delta, chain[k].stripped)
    return items, Bp, Cp


def isolate_roots(f: PEF, window, *, delta=DEFAULT_DELTA,
                  report: IsolationReport | None = None) -> list[IsolatingInterval]:
    """Disjoint open rational intervals, each with exactly one root of f in (B, C)."""
    B, C = Fraction(window[0]), Fraction(window[1])
    if not B < C:
        raise ValueError("window needs B < C")
    if f.is_zero():
        raise DegenerateInputError("cannot isolate the roots of the zero function")
    S0 = real_square_free(f)
    chain = build_chain(S0)
    if report is not None:
        report.chain = chain
        report.window = (B, C)
    delta = Fraction(delta)
    if B < 0 < C:
        left, _, lc = _isolate_side(chain, B, Fraction(0), delta)
        right, rb, _ = _isolate_side(chain, Fraction(0), C, delta)
        items = left
        if pef_sign_at(S0, 0) == 0:
            items = items + [("interval", lc, rb)]
        items = items + right
    else:
        items, _, _ = _isolate_side(chain, B, C, delta)
    out = [IsolatingInterval(it[1], it[2]) for it in items]
    if report is not None:
        report.intervals = out
    return out


def refine_isolation(f: PEF, iv: IsolatingInterval, width) -> IsolatingInterval:
    """Shrink an isolating interval of f to length at most ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    S = real_square_free(f)
    lo, hi = iv.low, iv.high
    if lo < 0 < hi and pef_sign_at(S, 0) == 0:
        return IsolatingInterval(max(lo, -width / 2), min(hi, width / 2))
    s_lo = pef_sign_at(S, lo)
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = pef_sign_at(S, m)
        if sm == 0:
            return IsolatingInterval(max(lo, m - width / 2), min(hi, m + width / 2))
        if s_lo * sm < 0:
            hi = m
        elif pef_sign_at(S, hi) * sm < 0:
            lo, s_lo = m, sm
        elif exist_root(S, (lo, m), DEFAULT_DELTA):
            hi = m
        else:
            lo, s_lo = m, sm
    return IsolatingInterval(lo, hi)
