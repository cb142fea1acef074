"""Walk through one check on the symmetric two-state chain.

From (1, 0) the first coordinate is 1/2 + e^{-2t}/2, so it reaches 0.6
exactly at t = ln(5)/2.  The script prints the trajectory PEF, the
satisfaction set of the atom, the verdict and the witness.
"""

import math
from fractions import Fraction

from cllcheck.algebra.matrix import RationalMatrix
from cllcheck.checker.atoms import AtomContext
from cllcheck.checker.until import model_check
from cllcheck.ctmc import CTMC, Distribution, trajectory_pef
from cllcheck.logic.normal import to_cnf
from cllcheck.logic.parser import parse, parse_state

chain = CTMC(("up", "down"), RationalMatrix([[-1, 1], [1, -1]]))
mu = Distribution((Fraction(1), Fraction(0)))

print("P[1](t) =", trajectory_pef(chain, mu, 1).describe())

ctx = AtomContext(chain, mu, 3)
sat = ctx.state_intervals(to_cnf(parse_state("P[1] in [0,0.6]")))
print("P[1] in [0,0.6] holds on", sat.render())

for text in ["F[0,3] P[1] in [0,0.6]",
             "G[0,1] P[1] in [0.9,1]",
             "P[1] in [0.9,1] U[0,1] P[1] in [0,0.6]"]:
    v = model_check(chain, mu, parse(text))
    print(f"{text:45s} {'SAT' if v.satisfied else 'UNSAT'}")
    for step in v.witness:
        step.time.refine(Fraction(1, 10**12))
        print("   ", step.render())

print(f"ln(5)/2 = {math.log(5) / 2:.12f}")
