"""Root existence on a closed interval by sampling with linear envelopes.

Samples ``f`` at ``N = ceil(4(b-a)M/delta)`` equal steps, approximates each
sample to within ``delta/4`` and brackets ``f`` between the envelopes
``q_j -+ delta/2``.  If the upper envelope is negative everywhere or the lower
one is positive everywhere there is no root.  If the upper envelope dips
below zero somewhere and the lower one rises above zero somewhere, a root
exists.  Otherwise the test repeats with ``delta/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .evaluate import lipschitz_bound, pef_eval_approx, pef_sign_at

MAX_DEPTH = 64


class PreconditionViolation(ValueError):
    """The function vanishes at an endpoint of the window."""


class ExistDepthExceeded(RuntimeError):
    """Too many halvings of delta: the function likely has a tangential zero."""


@dataclass
class ExistStep:
    delta: Fraction
    samples: int
    outcome: str  # "none", "root" or "refine"


@dataclass
class ExistTrace:
    steps: list = field(default_factory=list)


def exist_root(f, window, delta, *, trace: ExistTrace | None = None,
               max_depth: int = MAX_DEPTH, lipschitz: Fraction | None = None,
               max_samples: int | None = None) -> bool:
    """True iff f has a root in the closed window [a, b].

    ``max_samples`` caps the grid size of a single round; exceeding it raises
    ExistDepthExceeded just like running out of halvings.
    """
    a, b = Fraction(window[0]), Fraction(window[1])
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if pef_sign_at(f, a) == 0 or pef_sign_at(f, b) == 0:
        raise PreconditionViolation(f"f vanishes at an endpoint of [{a}, {b}]")
    if a == b:
        return False
    if a > b:
        raise ValueError("empty window")
    M = lipschitz if lipschitz is not None else lipschitz_bound(f, (a, b))
    for _ in range(max_depth + 1):
        n = max(1, ceil(4 * (b - a) * M / delta))
        if max_samples is not None and n > max_samples:
            raise ExistDepthExceeded(f"{n} samples needed on [{a}, {b}]")
        h = (b - a) / n
        tol = delta / 4
        half = delta / 2
        upper_neg = lower_pos = False
        all_upper_neg = all_lower_pos = True
        decided = None
        for j in range(n + 1):
            q = pef_eval_approx(f, a + j * h, tol)
            if q + half < 0:
                upper_neg = True
            else:
                all_upper_neg = False
            if q - half > 0:
                lower_pos = True
            else:
                all_lower_pos = False
            if upper_neg and lower_pos:
                decided = True
                break
        if decided is None and (all_upper_neg or all_lower_pos):
            decided = False
        if trace is not None:
            outcome = {True: "root", False: "none", None: "refine"}[decided]
            trace.steps.append(ExistStep(delta, n, outcome))
        if decided is not None:
            return decided
        delta = delta / 2
    raise ExistDepthExceeded(
        f"no decision after {max_depth} halvings of delta on [{a}, {b}]")
