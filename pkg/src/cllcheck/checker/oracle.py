"""Dense-grid numeric model checking, used to cross-check the exact checker.

The trajectory is sampled on a uniform grid and the until semantics are
simulated on grid indices.  A grid cannot tell open from closed ends or see
crossings that fall between samples, so the verdict is recomputed with every
window endpoint moved by +-margin and every atom bound moved by a tiny value
tolerance.  If any variant disagrees, the instance is flagged as being
within the margin of a boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil, floor

import numpy as np
from scipy.linalg import expm

from ..ctmc import CTMC, Distribution, SymbolizedCTMC
from ..logic.ast import (PAnd, PNot, PTrue, SAnd, SAtom, SNot, STrue, StateQuery, TimeWindow,
                         UntilChain, path_horizon)

DEFAULT_STEP = Fraction(1, 10**4)
DEFAULT_MARGIN = Fraction(1, 10**3)
VALUE_TOL = 1e-9


BLOCK = 512


def sample_trajectory(chain: CTMC, mu, horizon, step=DEFAULT_STEP) -> np.ndarray:
    """Distributions at t = 0, step, ..., horizon as rows of an array.

    Rows inside a block of BLOCK samples come from powers of the one-step
    propagator applied to the block's first row, and each block start is
    computed directly from expm, so rounding does not pile up over the grid.
    """
    H = Fraction(horizon)
    step = Fraction(step)
    n = int(H / step)
    A = np.array([[float(x) for x in r] for r in chain.Q.transpose().rows])
    v = np.array([float(p) for p in (mu.probs if isinstance(mu, Distribution) else mu)])
    d = len(v)
    powers = np.empty((BLOCK, d, d))
    powers[0] = np.eye(d)
    E = expm(A * float(step))
    for i in range(1, BLOCK):
        powers[i] = E @ powers[i - 1]
    out = np.empty((n + 1, d))
    for start in range(0, n + 1, BLOCK):
        v0 = expm(A * float(start * step)) @ v
        m = min(BLOCK, n + 1 - start)
        out[start:start + m] = powers[:m] @ v0
    return out


def _state_vec(phi, P: np.ndarray, tol: float) -> np.ndarray:
    if isinstance(phi, STrue):
        return np.ones(P.shape[0], dtype=bool)
    if isinstance(phi, SAtom):
        iv = phi.atom.interval
        x = P[:, phi.atom.state_index - 1]
        lo, hi = float(iv.low) - tol, float(iv.high) + tol
        lo_ok = x >= lo if (iv.low_closed or tol > 0) else x > lo
        hi_ok = x <= hi if (iv.high_closed or tol > 0) else x < hi
        if tol < 0 and iv.low == iv.high:
            # a point interval cannot shrink; compare with the exact value instead
            return np.isclose(x, float(iv.low), atol=VALUE_TOL, rtol=0)
        return lo_ok & hi_ok
    if isinstance(phi, SNot):
        return ~_state_vec(phi.arg, P, -tol)
    if isinstance(phi, SAnd):
        return _state_vec(phi.left, P, tol) & _state_vec(phi.right, P, tol)
    raise TypeError(f"not a state formula: {phi!r}")


def _index_range(w: TimeWindow, step: Fraction) -> tuple[int, int]:
    a = w.low / step
    b = w.high / step
    j_lo = ceil(a) if w.low_closed else floor(a) + 1
    j_hi = floor(b) if w.high_closed else ceil(b) - 1
    return j_lo, j_hi


def _next_fail(ok: np.ndarray) -> np.ndarray:
    """For each index x the smallest index >= x where ok is False (len(ok) if none)."""
    n = len(ok)
    idx = np.where(~ok, np.arange(n), n)
    return np.minimum.accumulate(idx[::-1])[::-1]


def _chain_vec(chain: UntilChain, P: np.ndarray, step: Fraction, tol: float) -> bool:
    n = P.shape[0]
    sats = [_state_vec(chain.phi0, P, tol)] + [_state_vec(s, P, tol) for _, s in chain.steps]
    S = np.zeros(n, dtype=bool)
    S[0] = True
    for k, (w, _) in enumerate(chain.steps, start=1):
        j_lo, j_hi = _index_range(w, step)
        nf = _next_fail(sats[k - 1])
        starts = np.nonzero(S)[0]
        new = np.zeros(n + 1, dtype=np.int64)
        if j_lo <= j_hi:
            first = starts + j_lo
            keep = first < n
            starts, first = starts[keep], first[keep]
            last = np.minimum(starts + j_hi, nf[first] if len(first) else first)
            last = np.minimum(last, n - 1)
            good = last >= first
            np.add.at(new, first[good], 1)
            np.add.at(new, last[good] + 1, -1)
        S = np.cumsum(new[:n]) > 0
        if not S.any():
            return False
    return bool((S & sats[-1]).any())


def _path_vec(phi, P: np.ndarray, step: Fraction, tol: float) -> bool:
    if isinstance(phi, PTrue):
        return True
    if isinstance(phi, StateQuery):
        return bool(_state_vec(phi.phi, P[:1], tol)[0])
    if isinstance(phi, UntilChain):
        return _chain_vec(phi, P, step, tol)
    if isinstance(phi, PNot):
        return not _path_vec(phi.arg, P, step, -tol)
    if isinstance(phi, PAnd):
        return _path_vec(phi.left, P, step, tol) and _path_vec(phi.right, P, step, tol)
    raise TypeError(f"not a path formula: {phi!r}")


def _window_variants(phi, margin: Fraction):
    """Copies of phi with one window endpoint moved by +-margin at a time."""
    chains = []

    def collect(p):
        if isinstance(p, UntilChain):
            chains.append(p)
        elif isinstance(p, PNot):
            collect(p.arg)
        elif isinstance(p, PAnd):
            collect(p.left)
            collect(p.right)

    collect(phi)
    for ci, ch in enumerate(chains):
        for si, (w, s) in enumerate(ch.steps):
            for attr in ("low", "high"):
                for d in (-margin, margin):
                    v = getattr(w, attr) + d
                    try:
                        nw = replace(w, **{attr: v})
                    except ValueError:
                        continue
                    steps = list(ch.steps)
                    steps[si] = (nw, s)
                    new_chain = UntilChain(ch.phi0, tuple(steps))
                    yield _substitute(phi, ch, new_chain)


def _substitute(phi, old, new):
    if phi is old:
        return new
    if isinstance(phi, PNot):
        return PNot(_substitute(phi.arg, old, new))
    if isinstance(phi, PAnd):
        return PAnd(_substitute(phi.left, old, new), _substitute(phi.right, old, new))
    return phi


@dataclass
class OracleResult:
    verdict: bool
    robust: bool
    variants: int
    disagreeing: int

    @property
    def inconclusive(self) -> bool:
        return not self.robust


def oracle_check(model, mu, phi, *, step=DEFAULT_STEP, margin=DEFAULT_MARGIN,
                 horizon=None) -> OracleResult:
    ctmc = model.chain if isinstance(model, SymbolizedCTMC) else model
    step = Fraction(step)
    margin = Fraction(margin)
    H = max(path_horizon(phi), Fraction(horizon or 0)) + 2 * margin
    P = sample_trajectory(ctmc, mu, H, step)
    base = _path_vec(phi, P, step, 0.0)
    others = [_path_vec(phi, P, step, VALUE_TOL), _path_vec(phi, P, step, -VALUE_TOL)]
    others += [_path_vec(v, P, step, 0.0) for v in _window_variants(phi, margin)]
    bad = sum(1 for o in others if o != base)
    return OracleResult(base, bad == 0, len(others), bad)
