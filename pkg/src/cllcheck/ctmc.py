"""Continuous-time Markov chains, symbolization and exact trajectories.

The distribution at time t is ``mu_t = exp(Q^T t) mu`` (rows of Q sum to zero,
so the transpose is what preserves total probability).  Each coordinate of
``mu_t`` is a real PEF whose exponents are eigenvalues of Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .algebra.matrix import RationalMatrix, jordan_decompose
from .pef.core import PEF, RealPEF


class ModelError(ValueError):
    """Invalid model data; ``diagnostics`` lists every violated condition."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def to_rational(x, what: str = "value") -> Fraction:
    """Exact rational from an int, a Fraction or a string like "3/40" or "0.025"."""
    if isinstance(x, bool):
        raise ModelError([f"{what}: expected a rational, got {x!r}"])
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ModelError([f"{what}: expected a rational, got {x!r}"])
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ModelError([f"{what}: expected a rational, got {x!r}"])


def fmt_rational(q: Fraction) -> str:
    """Decimal text when q has a short terminating expansion, else p/q."""
    q = Fraction(q)
    d = q.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        digits = 0
        while (q * 10 ** digits).denominator != 1:
            digits += 1
        if digits <= 12:
            s = f"{q.numerator / q.denominator:.{digits}f}" if digits else str(q.numerator)
            if Fraction(s) == q:
                return s
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class ProbInterval:
    low: Fraction
    high: Fraction
    low_closed: bool = True
    high_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "low", Fraction(self.low))
        object.__setattr__(self, "high", Fraction(self.high))
        problems = self.problems()
        if problems:
            raise ModelError(problems)

    def problems(self) -> list[str]:
        out = []
        if not (0 <= self.low <= self.high <= 1):
            out.append(f"interval {self.render()} must satisfy 0 <= low <= high <= 1")
        elif self.low == self.high and not (self.low_closed and self.high_closed):
            out.append(f"interval {self.render()} is empty")
        return out

    def contains(self, p) -> bool:
        p = Fraction(p)
        lo_ok = p > self.low or (self.low_closed and p == self.low)
        hi_ok = p < self.high or (self.high_closed and p == self.high)
        return lo_ok and hi_ok

    def complement(self) -> list["ProbInterval"]:
        """At most two intervals tiling [0, 1] minus this one."""
        out = []
        if self.low > 0 or not self.low_closed:
            out.append(ProbInterval(Fraction(0), self.low, True, not self.low_closed))
        if self.high < 1 or not self.high_closed:
            out.append(ProbInterval(self.high, Fraction(1), not self.high_closed, True))
        return out

    def render(self) -> str:
        lb = "[" if self.low_closed else "("
        rb = "]" if self.high_closed else ")"
        return f"{lb}{fmt_rational(self.low)},{fmt_rational(self.high)}{rb}"

    def __repr__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Atom:
    """``P[state_index] in interval`` with a 1-based state index."""

    state_index: int
    interval: ProbInterval

    def holds(self, probs) -> bool:
        return self.interval.contains(probs[self.state_index - 1])

    def render(self) -> str:
        return f"P[{self.state_index}] in {self.interval.render()}"

    def __repr__(self) -> str:
        return f"<{self.state_index},{self.interval.render()}>"


@dataclass(frozen=True)
class Distribution:
    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(Fraction(p) for p in self.probs))
        if any(p < 0 or p > 1 for p in self.probs):
            raise ModelError(["distribution entries must lie in [0, 1]"])
        if sum(self.probs) != 1:
            raise ModelError([f"distribution sums to {sum(self.probs)}, not 1"])

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, i: int) -> Fraction:
        return self.probs[i]


@dataclass(frozen=True)
class CTMC:
    states: tuple
    Q: RationalMatrix

    @property
    def dim(self) -> int:
        return self.Q.dim

    def problems(self) -> list[str]:
        out = []
        d = self.Q.dim
        if len(self.states) != d:
            out.append(f"{len(self.states)} state names for a {d}x{d} rate matrix")
        for i in range(d):
            for j in range(d):
                if i != j and self.Q[i, j] < 0:
                    out.append(f"Q[{i + 1}][{j + 1}] = {self.Q[i, j]} is a negative rate")
            s = sum(self.Q[i, j] for j in range(d))
            if s != 0:
                out.append(f"row {i + 1} sums to {s}")
        return out


@dataclass(frozen=True)
class SymbolizedCTMC:
    chain: CTMC
    intervals: tuple
    initial: Distribution | None = None

    def problems(self) -> list[str]:
        out = self.chain.problems()
        if not self.intervals:
            out.append("interval list is empty")
        if self.initial is not None and len(self.initial) != self.chain.dim:
            out.append(f"initial distribution has {len(self.initial)} entries, expected {self.chain.dim}")
        return out


def validate(model) -> list[str]:
    """Diagnostics for a CTMC or symbolized CTMC; an empty list means ok."""
    return model.problems()


def model_from_dict(data: dict, *, require_intervals: bool = True) -> SymbolizedCTMC:
    """Build and validate a model from the JSON document layout used by the CLI.

    Formulas carry their own atoms, so callers that never symbolize can pass
    ``require_intervals=False`` to accept a model without an interval list.
    """
    diags = []
    if not isinstance(data, dict):
        raise ModelError(["model must be an object"])
    rows = data.get("Q")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ModelError(["Q must be a nonempty list of rows"])
    d = len(rows)
    for i, r in enumerate(rows):
        if len(r) != d:
            diags.append(f"row {i + 1} has {len(r)} entries, expected {d}")
    if diags:
        raise ModelError(diags)
    Q = []
    for i, r in enumerate(rows):
        Q.append([to_rational(x, f"Q[{i + 1}][{j + 1}]") for j, x in enumerate(r)])
    states = data.get("states") or [f"s{i + 1}" for i in range(d)]
    chain = CTMC(tuple(str(s) for s in states), RationalMatrix(Q))
    intervals = []
    for k, iv in enumerate(data.get("intervals", [])):
        try:
            intervals.append(ProbInterval(
                to_rational(iv["low"], f"intervals[{k}].low"),
                to_rational(iv["high"], f"intervals[{k}].high"),
                bool(iv.get("low_closed", True)), bool(iv.get("high_closed", True))))
        except KeyError as e:
            diags.append(f"intervals[{k}] is missing {e.args[0]!r}")
        except ModelError as e:
            diags.extend(f"intervals[{k}]: {m}" for m in e.diagnostics)
    initial = None
    if "initial" in data:
        try:
            initial = Distribution(tuple(to_rational(x, "initial") for x in data["initial"]))
        except ModelError as e:
            diags.extend(e.diagnostics)
    model = SymbolizedCTMC(chain, tuple(intervals), initial)
    problems = model.problems()
    if not require_intervals and not intervals:
        problems = [m for m in problems if m != "interval list is empty"]
    diags.extend(problems)
    if diags:
        raise ModelError(diags)
    return model


def symbolize(mu, intervals) -> set[Atom]:
    """All atoms <j, I> with mu(j) in I."""
    probs = mu.probs if isinstance(mu, Distribution) else tuple(Fraction(p) for p in mu)
    return {Atom(j + 1, iv) for j, p in enumerate(probs) for iv in intervals if iv.contains(p)}


# exact trajectories --------------------------------------------------------------
@lru_cache(maxsize=256)
def _trajectories(Q: RationalMatrix, probs: tuple) -> tuple:
    jd = jordan_decompose(Q.transpose())
    K = jd.field
    n = Q.dim
    Pinv = jd.Pinv.to_list()
    P = jd.P.to_list()
    mu = [K.rational(p) for p in probs]
    v = []
    for a in range(n):
        acc = K.zero
        for b in range(n):
            acc = acc + P[a][b] * mu[b]
        v.append(acc)
    out = []
    for i in range(n):
        terms = []
        pos = 0
        for lam, size in jd.blocks:
            # row a of exp(J t) restricted to the block: t^(b-a)/(b-a)! e^{lam t}
            coeffs = [K.zero] * size
            for a in range(size):
                w = Pinv[i][pos + a]
                if not w:
                    continue
                for b in range(a, size):
                    m = b - a
                    coeffs[m] = coeffs[m] + w * v[pos + b] * K.rational(Fraction(1, math.factorial(m)))
            terms.append((lam, tuple(coeffs)))
            pos += size
        out.append(RealPEF(PEF(K, terms)))
    return tuple(out)


def trajectory_pef(chain: CTMC, mu, i: int) -> RealPEF:
    """The real PEF t -> (exp(Q^T t) mu)(i) for a 1-based state index i."""
    probs = mu.probs if isinstance(mu, Distribution) else tuple(Fraction(p) for p in mu)
    if not 1 <= i <= chain.dim:
        raise IndexError(f"state index {i} out of range 1..{chain.dim}")
    return _trajectories(chain.Q, probs)[i - 1]


def trajectory_pefs(chain: CTMC, mu) -> tuple:
    probs = mu.probs if isinstance(mu, Distribution) else tuple(Fraction(p) for p in mu)
    return _trajectories(chain.Q, probs)


# numeric oracle ----------------------------------------------------------------
def _expm_apply(A, v, t, dps: int):
    """exp(A t) v by scaling and squaring a truncated Taylor series."""
    with mpmath.workdps(dps):
        n = len(v)
        M = mpmath.matrix([[mpmath.mpf(A[i][j].numerator) / A[i][j].denominator for j in range(n)]
                           for i in range(n)]) * (mpmath.mpf(t.numerator) / t.denominator)
        norm = max(sum(abs(M[i, j]) for j in range(n)) for i in range(n))
        s = 0
        while norm > 0.5:
            norm /= 2
            s += 1
        M = M / (2 ** s)
        E = mpmath.eye(n)
        term = mpmath.eye(n)
        k = 1
        tol = mpmath.mpf(2) ** (-dps * 4)
        while True:
            term = term * M / k
            E = E + term
            # remaining tail is at most |term| * norm / (1 - norm) in the 1-norm
            if mpmath.mnorm(term, 1) < tol:
                break
            k += 1
        for _ in range(s):
            E = E * E
        x = E * mpmath.matrix([mpmath.mpf(p.numerator) / p.denominator for p in v])
        return [x[i] for i in range(n)]


def numeric_distribution(chain: CTMC, mu, t, eps=Fraction(1, 10**12)) -> list[float]:
    """Approximate mu_t coordinates within eps, doubling precision until stable."""
    t = Fraction(t)
    eps = Fraction(eps)
    if t < 0 or eps <= 0:
        raise ValueError("need t >= 0 and eps > 0")
    probs = mu.probs if isinstance(mu, Distribution) else tuple(Fraction(p) for p in mu)
    if t == 0:
        return [float(p) for p in probs]
    A = chain.Q.transpose().rows
    dps = 30
    prev = _expm_apply(A, probs, t, dps)
    while True:
        dps *= 2
        cur = _expm_apply(A, probs, t, dps)
        with mpmath.workdps(dps):
            diff = max(abs(a - b) for a, b in zip(prev, cur))
            if diff < mpmath.mpf(eps.numerator) / eps.denominator / 4:
                return [float(x) for x in cur]
        prev = cur
