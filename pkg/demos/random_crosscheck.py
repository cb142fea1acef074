"""Compare exact verdicts with the sampling oracle on random instances.

Usage: python demos/random_crosscheck.py [COUNT] [SEED]
"""

import random
import sys
import time

from cllcheck.checker.oracle import oracle_check
from cllcheck.checker.random_instances import random_chain, random_ctmc, random_distribution
from cllcheck.checker.until import model_check
from cllcheck.logic.normal import print_path

count = int(sys.argv[1]) if len(sys.argv) > 1 else 20
rng = random.Random(int(sys.argv[2]) if len(sys.argv) > 2 else 0)
tally = {"agree": 0, "near": 0, "disagree": 0}
start = time.perf_counter()
for n in range(count):
    chain, mu = random_ctmc(rng), random_distribution(rng)
    phi = random_chain(rng)
    exact = model_check(chain, mu, phi).satisfied
    ref = oracle_check(chain, mu, phi)
    if not ref.robust:
        key = "near"
    else:
        key = "agree" if exact == ref.verdict else "disagree"
    tally[key] += 1
    if key != "agree":
        print(f"#{n} {key}: {print_path(phi)}")
print(tally, f"{time.perf_counter() - start:.1f} s")
