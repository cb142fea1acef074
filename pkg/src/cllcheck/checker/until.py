"""Deciding until chains by exact reachable-time propagation.

For ``phi0 U^{T1} phi1 ... U^{Tn} phin`` let ``S_0 = {0}`` and let ``S_k``
be the set of absolute times ``s + t`` with ``s`` in ``S_{k-1}``, ``t`` in
``T_k`` and ``phi_{k-1}`` holding at every ``s + t'`` with ``t'`` in
``T_k`` and ``t' < t``.  The chain holds iff ``S_n`` meets the satisfaction
set of ``phin``.

Each ``S_k`` is a finite union of intervals with symbolic endpoints.  For an
interval R of ``S_{k-1}`` and a maximal interval I where ``phi_{k-1}``
holds, the starts s whose run up to ``s + t`` stays inside I are those with
``s + lo`` in I (right end excluded), and the reachable ends form one
interval with left end ``inf + lo`` and right end ``min(sup + hi, sup I)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..ctmc import Distribution, SymbolizedCTMC
from ..logic.ast import StateQuery, UntilChain, eval_state, path_horizon
from ..logic.normal import (AllOf, AnyOf, Const, Leaf, normalize_path, print_path, print_state,
                            to_cnf)
from ..pef.times import SymbolicTime, compare_times
from .atoms import AtomContext
from .intervals import IntervalSet, SymbolicInterval, combine, pick_point


@dataclass
class WitnessStep:
    """Level k of a witness: phi_{k-1} holds on ``run`` and the chain moves on at ``time``."""

    level: int
    time: SymbolicTime
    run: SymbolicInterval | None

    def render(self) -> str:
        run = self.run.render() if self.run is not None else "(empty)"
        return f"level {self.level}: t = {self.time.render()} ~ {self.time.approx():.9g}, hold on {run}"


@dataclass
class Verdict:
    satisfied: bool
    witness: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    formula: str = ""


@dataclass
class _Piece:
    interval: SymbolicInterval
    source: SymbolicInterval  # interval of S_{k-1} it came from
    run: SymbolicInterval | None  # None for the "t = inf T" piece


def _cmp(a: SymbolicTime, b: SymbolicTime, g=0) -> int:
    return compare_times(a, b, g)


def _propagate(S_prev: IntervalSet, window, sat: IntervalSet) -> tuple[IntervalSet, list]:
    lo, hi = window.low, window.high
    pieces = []
    for R in S_prev:
        if window.low_closed:
            pieces.append(_Piece(R.shift(lo), R, None))
        if lo == hi:
            continue
        for I in sat:
            J = SymbolicInterval(I.low, I.high, I.low_closed if window.low_closed else True, False)
            if _cmp(J.low, J.high) >= 0:
                continue
            RI = combine([IntervalSet([R]), IntervalSet([J.shift(-lo)])], all)
            for ri in RI:
                c = _cmp(ri.high, I.high, -hi)  # sign of (sup RI + hi) - sup I
                if c > 0:
                    right, rc = I.high, True
                elif c == 0:
                    right, rc = I.high, ri.high_closed and window.high_closed
                else:
                    right, rc = ri.high.shift(hi), ri.high_closed and window.high_closed
                piece = SymbolicInterval(ri.low.shift(lo), right, False, rc)
                pieces.append(_Piece(piece, ri, I))
    S = combine([IntervalSet([p.interval]) for p in pieces], any) if pieces else IntervalSet.empty()
    return S, pieces


def _back_step(x: SymbolicTime, window, pieces: list) -> tuple[SymbolicTime, SymbolicInterval | None]:
    """A predecessor s of the reachable time x, and the run where phi_{k-1} must hold."""
    lo, hi = window.low, window.high
    for p in pieces:
        if not p.interval.contains(x):
            continue
        if p.run is None:
            return x.shift(-lo), None
        # s in RI with s + lo < x <= s + hi (strict when hi is open)
        lo_t = x.shift(-hi)
        cand = SymbolicInterval(lo_t, x.shift(-lo), window.high_closed, False)
        opts = combine([IntervalSet([p.source]), IntervalSet([cand])], all)
        if not opts:
            continue
        s = pick_point(opts.intervals[0])
        run = SymbolicInterval(s.shift(lo), x, window.low_closed, False)
        return s, run
    raise RuntimeError("reachable time without a predecessor")


def check_until_chain(model, mu, chain: UntilChain, *, context: AtomContext | None = None) -> Verdict:
    ctmc = model.chain if isinstance(model, SymbolizedCTMC) else model
    H = chain.horizon
    ctx = context or AtomContext(ctmc, mu, H)
    if ctx.H < H:
        raise ValueError("atom context horizon is shorter than the chain")
    formulas = [chain.phi0] + [s for _, s in chain.steps]
    sats = [ctx.state_intervals(to_cnf(phi)) for phi in formulas]
    diags = [f"formula: {print_path(chain)}"]
    for k, s in enumerate(sats):
        diags.append(f"Sat(phi{k}) = {s.render()}")
    S = IntervalSet([SymbolicInterval.closed(0, 0)])
    history = []
    for k, (w, _) in enumerate(chain.steps, start=1):
        S, pieces = _propagate(S, w, sats[k - 1])
        history.append(pieces)
        diags.append(f"S_{k} = {S.render()}")
        if not S:
            break
    final = S.intersect(sats[-1]) if S else IntervalSet.empty()
    diags.append(f"S_n & Sat(phin) = {final.render()}")
    if not final:
        return Verdict(False, [], diags, print_path(chain))
    x = pick_point(final.intervals[0])
    steps = []
    for k in range(len(chain.steps), 0, -1):
        w = chain.steps[k - 1][0]
        s, run = _back_step(x, w, history[k - 1])
        steps.append(WitnessStep(k, x, run))
        x = s
    steps.reverse()
    return Verdict(True, steps, diags, print_path(chain))


def _leaf_verdict(model, mu, formula, ctx) -> Verdict:
    if isinstance(formula, StateQuery):
        probs = mu.probs if isinstance(mu, Distribution) else mu
        ok = eval_state(formula.phi, probs)
        return Verdict(ok, [], [f"{print_state(formula.phi)} at t = 0: {ok}"], print_path(formula))
    return check_until_chain(model, mu, formula, context=ctx)


def model_check(model, mu, phi, *, horizon=None) -> Verdict:
    """Decide whether the trajectory from mu satisfies the path formula phi."""
    ctmc = model.chain if isinstance(model, SymbolizedCTMC) else model
    if not isinstance(mu, Distribution):
        mu = Distribution(tuple(mu))
    if len(mu) != ctmc.dim:
        raise ValueError(f"initial distribution has {len(mu)} entries, model has {ctmc.dim} states")
    H = max(path_horizon(phi), Fraction(horizon or 0))
    ctx = AtomContext(ctmc, mu, H)
    tree = normalize_path(phi)
    diags = []
    witness = []

    def ev(t) -> bool:
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Leaf):
            v = _leaf_verdict(model, mu, t.formula, ctx)
            diags.extend(v.diagnostics)
            result = v.satisfied != t.negated
            if result and not t.negated:
                witness.extend(v.witness)
            return result
        if isinstance(t, AllOf):
            return all(ev(x) for x in t.items)
        if isinstance(t, AnyOf):
            return any(ev(x) for x in t.items)
        raise TypeError(t)

    ok = ev(tree)
    return Verdict(ok, witness if ok else [], diags, print_path(phi))
