"""Command-line interface: ``cllcheck check|isolate|trace|simulate``.

Exit codes: 0 when the command ran (SAT or UNSAT for ``check``), 2 on invalid
input (model, formula, flags), 3 when an exact comparison ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import sympy
from sympy import Poly
from sympy.parsing.sympy_parser import (implicit_multiplication_application, parse_expr,
                                        split_symbols, standard_transformations)
from tokenize import TokenError

from .algebra.algebraic import X
from .algebra.numberfield import NumberField, splitting_field
from .checker.atoms import AtomContext, symbolic_path
from .checker.oracle import DEFAULT_MARGIN, DEFAULT_STEP, oracle_check, sample_trajectory
from .checker.report import dumps, interval_record, verdict_record
from .checker.until import model_check
from .ctmc import Atom, Distribution, ModelError, fmt_rational, model_from_dict, to_rational, trajectory_pef
from .logic.ast import path_horizon
from .logic.parser import ParseError, parse
from .pef import times as times_mod
from .pef.core import PEF, DegenerateInputError, RealPEF
from .pef.exist import ExistDepthExceeded
from .pef.isolate import IsolationReport, isolate_roots, refine_isolation
from .pef.times import Undecided

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED = 0, 2, 3
DEFAULT_BUDGET = times_mod.DEFAULT_BUDGET


class InputError(ValueError):
    pass


# input helpers ------------------------------------------------------------------
def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text)
    except ModelError as e:
        raise argparse.ArgumentTypeError(str(e))


def load_model(path: str):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read model file {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InputError(f"model file {path} is not valid JSON: line {e.lineno} column {e.colno}: {e.msg}")
    return model_from_dict(data, require_intervals=False)


def load_formula(text: str):
    p = Path(text)
    if len(text) < 4096 and p.suffix and p.is_file():
        text = p.read_text().strip()
    return parse(text)


def _initial(model) -> Distribution:
    if model.initial is None:
        raise InputError("the model has no 'initial' distribution")
    return model.initial


def _gaussian_field(need_i: bool):
    if not need_i:
        return NumberField.rationals(), None
    K, roots = splitting_field(Poly(X**2 + 1, X))
    i = next(r for r, _ in roots if K.approx(r).imag > 0)
    return K, i


# "2t e^{-it}" style input: implicit products, "it" read as i*t
_PEF_SYNTAX = standard_transformations + (split_symbols, implicit_multiplication_application)


def parse_pef(text: str) -> RealPEF:
    """A real PEF from text like ``e^{it}+e^{-it}``, ``t - 1`` or ``2*t*e^{-3t} - 1/2``.

    Coefficients and exponents must be Gaussian rationals (``i`` is the
    imaginary unit) and the function must be real-valued.
    """
    t = sympy.Symbol("t")
    src = text.replace("^{", "**(").replace("}", ")").replace("^", "**")
    src = src.replace("e**", "exp")
    try:
        expr = parse_expr(src, local_dict={"t": t, "i": sympy.I, "I": sympy.I, "e": sympy.E,
                                           "exp": sympy.exp}, transformations=_PEF_SYNTAX)
    except (sympy.SympifyError, SyntaxError, TypeError, TokenError) as e:
        raise InputError(f"cannot parse PEF {text!r}: {e}")
    expr = sympy.expand(sympy.powsimp(sympy.expand(expr)))
    raw = []
    need_i = False
    for term in sympy.Add.make_args(expr):
        lam = sympy.Integer(0)
        deg = 0
        coeff = sympy.Integer(1)
        for f in sympy.Mul.make_args(term):
            if isinstance(f, sympy.exp) or (f.is_Pow and f.base == sympy.E):
                arg = f.args[0] if isinstance(f, sympy.exp) else f.exp
                lam += sympy.simplify(arg / t)
            elif f == t:
                deg += 1
            elif f.is_Pow and f.base == t and f.exp.is_Integer and f.exp > 0:
                deg += int(f.exp)
            elif f.free_symbols:
                raise InputError(f"unsupported factor {f} in {text!r}")
            else:
                coeff *= f
        parts = []
        for v in (coeff, lam):
            if v.free_symbols:
                raise InputError(f"exponent of {term} is not linear in t")
            re, im = sympy.nsimplify(v).as_real_imag()
            if not (re.is_Rational and im.is_Rational):
                raise InputError(f"{v} is not a Gaussian rational")
            need_i = need_i or im != 0
            parts.append((Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))))
        raw.append((parts[0], parts[1], deg))
    K, i = _gaussian_field(need_i)

    def el(re_im):
        v = K.rational(re_im[0])
        if re_im[1]:
            v = v + i * K.rational(re_im[1])
        return v

    terms = []
    for c, lam, deg in raw:
        coeffs = [K.zero] * deg + [el(c)]
        terms.append((el(lam), tuple(coeffs)))
    f = PEF(K, terms)
    if not f.is_real_symbolic():
        raise InputError(f"{text!r} is not real-valued")
    return RealPEF(f)


def _window(text: str | None, default_high: Fraction) -> tuple[Fraction, Fraction]:
    if text is None:
        return Fraction(0), default_high
    parts = text.strip("()[] ").split(",")
    if len(parts) != 2:
        raise InputError(f"window must look like LOW,HIGH, got {text!r}")
    lo, hi = (to_rational(p) for p in parts)
    if not lo < hi:
        raise InputError(f"window {text!r} is empty")
    return lo, hi


def _emit(args, record: dict, human: list[str]):
    if args.format == "structured":
        print(dumps(record))
    else:
        for line in human:
            print(line)


# subcommands ------------------------------------------------------------------------
def cmd_check(args) -> int:
    model = load_model(args.model)
    phi = load_formula(args.formula)
    mu = _initial(model)
    v = model_check(model, mu, phi, horizon=args.horizon)
    witness_lines = []
    for w in v.witness:
        w.time.refine(args.epsilon)
        witness_lines.append("  " + w.render())
    human = ["SAT" if v.satisfied else "UNSAT"] + witness_lines
    if args.verbose:
        human += ["  " + d for d in v.diagnostics]
    _emit(args, verdict_record(v), human)
    return EXIT_OK


def cmd_isolate(args) -> int:
    if args.pef is not None:
        f = parse_pef(args.pef)
        label = args.pef
        default_high = args.horizon
    else:
        if args.model is None or args.state is None:
            raise InputError("isolate needs --pef, or --model with --state (and optionally --level)")
        model = load_model(args.model)
        mu = _initial(model)
        if not 1 <= args.state <= model.chain.dim:
            raise InputError(f"state {args.state} out of range 1..{model.chain.dim}")
        f = trajectory_pef(model.chain, mu, args.state) - args.level
        label = f"P[{args.state}] - {fmt_rational(args.level)}"
        default_high = args.horizon
        if default_high is None and args.formula:
            default_high = path_horizon(load_formula(args.formula))
    if default_high is None and args.window is None:
        raise InputError("give --window or --horizon")
    lo, hi = _window(args.window, default_high)
    report = IsolationReport()
    ivs = isolate_roots(f, (lo, hi), delta=args.delta, report=report)
    refined = [refine_isolation(f, iv, args.epsilon) for iv in ivs]
    human = [f"{label} on ({lo}, {hi}): {len(refined)} root(s)"]
    for iv in refined:
        mid = (iv.low + iv.high) / 2
        human.append(f"  ({iv.low}, {iv.high})  ~ {float(mid):.12g}")
    if args.verbose:
        human += ["  " + line for line in report.lines()]
    record = {"verdict": None, "witness": [], "margins": [],
              "intervals": [{"low": str(iv.low), "high": str(iv.high),
                             "approx": float((iv.low + iv.high) / 2)} for iv in refined]}
    if args.verbose:
        record["chain"] = report.lines()
    _emit(args, record, human)
    return EXIT_OK


def cmd_trace(args) -> int:
    model = load_model(args.model)
    mu = _initial(model)
    H = args.horizon
    if H is None and args.formula:
        H = path_horizon(load_formula(args.formula))
    if H is None:
        raise InputError("trace needs --horizon or --formula")
    ctx = AtomContext(model.chain, mu, H, delta=args.delta)
    atoms = [Atom(k, iv) for k in range(1, model.chain.dim + 1) for iv in model.intervals]
    segs = symbolic_path(ctx, atoms)
    human = [f"symbolic path on [0, {fmt_rational(H)}]: {len(segs)} segment(s)"]
    records = []
    for iv, sat in segs:
        names = sorted((a.state_index, a.interval.low, a.interval.high, repr(a)) for a in sat)
        txt = "{" + ", ".join(n[3] for n in names) + "}"
        a, b = iv.approx()
        lb, rb = "[" if iv.low_closed else "(", "]" if iv.high_closed else ")"
        human.append(f"  {iv.render()}  ~ {lb}{a:.9g}, {b:.9g}{rb}  {txt}")
        records.append({"segment": interval_record(iv), "atoms": [n[3] for n in names]})
    step = args.step
    samples = []
    if step is not None and step > 0:
        P = sample_trajectory(model.chain, mu, H, step)
        for j, row in enumerate(P):
            samples.append([float(j * step)] + [float(x) for x in row])
        human.append("samples (t, mu_t):")
        human += ["  " + " ".join(f"{x:.9g}" for x in s) for s in samples]
    record = {"verdict": None, "witness": [], "margins": [], "intervals": records, "samples": samples}
    _emit(args, record, human)
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = load_model(args.model)
    phi = load_formula(args.formula)
    mu = _initial(model)
    exact = model_check(model, mu, phi, horizon=args.horizon)
    o = oracle_check(model, mu, phi, step=args.step or DEFAULT_STEP, margin=args.margin, horizon=args.horizon)
    agree = o.verdict == exact.satisfied
    status = "agreement" if agree else ("inconclusive near boundary" if o.inconclusive else "DISAGREEMENT")
    if agree and o.inconclusive:
        status = "agreement (inconclusive near boundary)"
    human = [
        f"exact:  {'SAT' if exact.satisfied else 'UNSAT'}",
        f"oracle: {'SAT' if o.verdict else 'UNSAT'} (grid step {args.step or DEFAULT_STEP})",
        f"margin {args.margin}: {'robust' if o.robust else f'{o.disagreeing} of {o.variants} perturbed variants disagree'}",
        status,
    ]
    margins = [{"margin": str(args.margin), "robust": o.robust, "variants": o.variants,
                "disagreeing": o.disagreeing}]
    record = verdict_record(exact, margins=margins)
    record["oracle"] = "SAT" if o.verdict else "UNSAT"
    record["status"] = status
    _emit(args, record, human)
    return EXIT_OK if agree or o.inconclusive else 1


# argument parsing --------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model file (JSON)")
    common.add_argument("--formula", help="formula text, or a file containing it")
    common.add_argument("--epsilon", type=_rational_arg, default=Fraction(1, 10**9),
                        help="width for refined root intervals (default 1e-9)")
    common.add_argument("--delta", type=_rational_arg, default=Fraction(1, 2),
                        help="initial tolerance of the root-existence test (default 1/2)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="refinement steps allowed per time comparison")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--horizon", type=_rational_arg, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cllcheck", description="Exact CLL model checking of CTMC distribution trajectories.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="decide a formula")
    iso = sub.add_parser("isolate", parents=[common], help="isolate real roots of a PEF")
    iso.add_argument("--pef", help='raw PEF such as "e^{it}+e^{-it}"')
    iso.add_argument("--state", type=int, help="model coordinate (1-based)")
    iso.add_argument("--level", type=_rational_arg, default=Fraction(0), help="subtract this constant")
    iso.add_argument("--window", help="LOW,HIGH (default 0,horizon)")
    tr = sub.add_parser("trace", parents=[common], help="symbolic path and samples")
    tr.add_argument("--step", type=_rational_arg, default=None, help="sample spacing for (t, mu_t)")
    sim = sub.add_parser("simulate", parents=[common], help="cross-check against a numeric grid")
    sim.add_argument("--step", type=_rational_arg, default=None, help=f"grid step (default {DEFAULT_STEP})")
    sim.add_argument("--margin", type=_rational_arg, default=DEFAULT_MARGIN)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.epsilon <= 0 or args.delta <= 0 or args.budget < 1:
        print("error: --epsilon and --delta must be positive and --budget at least 1", file=sys.stderr)
        return EXIT_INPUT
    if args.command in ("check", "simulate") and (args.model is None or args.formula is None):
        print(f"error: {args.command} needs --model and --formula", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "trace" and args.model is None:
        print("error: trace needs --model", file=sys.stderr)
        return EXIT_INPUT
    handler = {"check": cmd_check, "isolate": cmd_isolate, "trace": cmd_trace, "simulate": cmd_simulate}
    times_mod.DEFAULT_BUDGET = args.budget
    try:
        return handler[args.command](args)
    except ParseError as e:
        print(f"error: {e}\n{e.pointer()}", file=sys.stderr)
        return EXIT_INPUT
    except ModelError as e:
        for d in e.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, DegenerateInputError, IndexError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (Undecided, ExistDepthExceeded) as e:
        print(f"undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    finally:
        times_mod.DEFAULT_BUDGET = DEFAULT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
