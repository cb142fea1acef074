"""Isolate and refine the zeros of e^{it} + e^{-it} = 2 cos t on (0, 10)."""

import math
from fractions import Fraction

from sympy import Poly

from cllcheck.algebra.algebraic import X
from cllcheck.algebra.numberfield import splitting_field
from cllcheck.pef.core import PEF, RealPEF
from cllcheck.pef.isolate import IsolationReport, isolate_roots, refine_isolation

K, roots = splitting_field(Poly(X**2 + 1, X))
i = next(r for r, _ in roots if K.approx(r).imag > 0)
f = RealPEF(PEF(K, [(i, (K.one,)), (-i, (K.one,))]))

report = IsolationReport()
intervals = isolate_roots(f, (0, 10), report=report)
print("\n".join(report.lines()))
for iv, k in zip(intervals, (1, 3, 5)):
    fine = refine_isolation(f, iv, Fraction(1, 10**9))
    print(f"({float(iv.low):.4f}, {float(iv.high):.4f}) -> {float(fine.low):.10f}  [{k}pi/2 = {k * math.pi / 2:.10f}]")
