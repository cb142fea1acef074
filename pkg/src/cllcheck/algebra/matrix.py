"""Rational matrices, characteristic polynomials and exact Jordan decompositions."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, QQ
from sympy.polys.matrices import DomainMatrix

from .algebraic import X, AlgebraicNumber, qpoly
from .numberfield import NumberField, splitting_field


def _to_q(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


class RationalMatrix:
    """A square matrix of exact rationals."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(c) for c in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "RationalMatrix([" + ", ".join(
            "[" + ", ".join(str(c) for c in r) + "]" for r in self.rows) + "])"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.rows)))

    def to_domain(self, field: NumberField | None = None) -> DomainMatrix:
        n = self.dim
        if field is None:
            return DomainMatrix([[_to_q(c) for c in r] for r in self.rows], (n, n), QQ)
        return DomainMatrix([[field.rational(c) for c in r] for r in self.rows], (n, n), field.dom)


def char_poly(M: RationalMatrix) -> Poly:
    """det(xI - M) over the rationals."""
    if M.dim == 0:
        return qpoly([1])
    return Poly(M.to_domain().charpoly(), X, domain=QQ)


@functools.lru_cache(maxsize=64)
def eigen_field(M: RationalMatrix) -> tuple[NumberField, tuple]:
    """Splitting field of char_poly(M) and its roots as (element, multiplicity)."""
    K, roots = splitting_field(char_poly(M))
    roots = sorted(roots, key=functools.cmp_to_key(lambda a, b: K.compare_key(a[0], b[0])))
    return K, tuple(roots)


def eigenvalues(M: RationalMatrix) -> list[tuple[AlgebraicNumber, int]]:
    K, roots = eigen_field(M)
    return [(K.to_algebraic(r), m) for r, m in roots]


@dataclass(frozen=True)
class JordanDecomposition:
    """``Pinv @ J @ P == M`` with blocks (eigenvalue, size) along the diagonal of J."""

    field: NumberField
    P: DomainMatrix
    Pinv: DomainMatrix
    blocks: tuple

    def J(self) -> DomainMatrix:
        K = self.field
        n = sum(s for _, s in self.blocks)
        rows = [[K.zero] * n for _ in range(n)]
        pos = 0
        for lam, size in self.blocks:
            for a in range(size):
                rows[pos + a][pos + a] = lam
                if a + 1 < size:
                    rows[pos + a][pos + a + 1] = K.one
            pos += size
        return DomainMatrix(rows, (n, n), K.dom)

    def reconstruct(self) -> DomainMatrix:
        return self.Pinv.matmul(self.J()).matmul(self.P)

    def block_eigenvalues(self) -> list[tuple[AlgebraicNumber, int]]:
        return [(self.field.to_algebraic(lam), s) for lam, s in self.blocks]

    def entry(self, which: str, i: int, j: int) -> AlgebraicNumber:
        mat = self.P if which == "P" else self.Pinv
        return self.field.to_algebraic(mat.to_list()[i][j])


def _rank(vectors, n, dom) -> int:
    if not vectors:
        return 0
    return DomainMatrix([list(v) for v in vectors], (len(vectors), n), dom).rank()


def _kernel(A: DomainMatrix) -> list[list]:
    ns = A.nullspace()
    return [list(r) for r in ns.to_list()] if ns.shape[0] else []


def _apply(A: DomainMatrix, v: list) -> list:
    n = A.shape[0]
    col = DomainMatrix([[c] for c in v], (n, 1), A.domain)
    return [r[0] for r in A.matmul(col).to_list()]


@functools.lru_cache(maxsize=64)
def jordan_decompose(M: RationalMatrix) -> JordanDecomposition:
    K, roots = eigen_field(M)
    n = M.dim
    A = M.to_domain(K).to_dense()
    I = DomainMatrix.eye(n, K.dom).to_dense()
    columns: list[list] = []
    blocks = []
    for lam, mult in roots:
        N = A - I * lam
        powers = [I]
        kernels = [[]]
        while len(kernels[-1]) < mult:
            powers.append(powers[-1].matmul(N))
            kernels.append(_kernel(powers[-1]))
            if len(powers) > n + 1:
                raise RuntimeError("generalized eigenspace did not stabilize")
        depth = len(kernels) - 1
        # chain vectors already placed, indexed by their level
        placed: dict[int, list] = {j: [] for j in range(1, depth + 1)}
        chains = []
        for j in range(depth, 0, -1):
            base = list(kernels[j - 1]) + placed[j]
            r = _rank(base, n, K.dom)
            for v in kernels[j]:
                if _rank(base + [v], n, K.dom) > r:
                    base.append(v)
                    r += 1
                    chain = [v]
                    for _ in range(j - 1):
                        chain.append(_apply(N, chain[-1]))
                    for lvl, w in zip(range(j, 0, -1), chain):
                        if lvl != j:
                            placed[lvl].append(w)
                    chains.append(chain)
        chains.sort(key=len)
        for chain in chains:
            columns.extend(reversed(chain))
            blocks.append((lam, len(chain)))
    V = DomainMatrix([[columns[c][r] for c in range(n)] for r in range(n)], (n, n), K.dom)
    return JordanDecomposition(K, V.inv(), V, tuple(blocks))
