from fractions import Fraction

import pytest

from cllcheck.algebra.matrix import RationalMatrix
from cllcheck.ctmc import CTMC, Distribution

from helpers import THREE_STATE_Q


@pytest.fixture
def two_state():
    Q = RationalMatrix([[-1, 1], [1, -1]])
    return CTMC(("a", "b"), Q), Distribution((Fraction(1), Fraction(0)))


@pytest.fixture
def three_state():
    return CTMC(("s1", "s2", "s3"), THREE_STATE_Q)
