"""
Full-rank lattices in a definite quaternion algebra.

A lattice is stored by the Hermite normal form of its basis, which makes
equality and hashing canonical. The reduced norm restricted to a lattice is
a positive definite quaternary form; short vectors are enumerated exactly
by Fincke-Pohst on an LLL-reduced basis.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, isqrt, lcm
from typing import Callable, List, Sequence, Tuple

from sympy import Matrix, QQ, ZZ
from sympy.matrices.normalforms import hermite_normal_form
from sympy.polys.matrices import DomainMatrix

from .algebra import Quaternion, QuaternionAlgebra, quaternion

logger = logging.getLogger(__name__)

# Scale of the integer embedding handed to LLL.
EMBEDDING_SCALE = 2 ** 40


def hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    Hermite normal form of the lattice spanned by integer rows.

    sympy returns the column form W: upper triangular with positive diagonal
    and 0 <= W[i][j] < W[i][i] for j > i. Its columns are returned as rows,
    so basis vector s is supported on the coordinates 0..s.
    """
    A = [[int(x) for x in row] for row in rows if any(row)]
    if not A:
        return []
    W = hermite_normal_form(Matrix(A).T)
    return [[int(W[i, j]) for i in range(W.rows)] for j in range(W.cols)]


def _denominator(vectors: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for v in vectors:
        for c in v:
            d = lcm(d, Fraction(c).denominator)
    return d


@dataclass(frozen=True)
class Lattice:
    """A rank-4 Z-lattice in a quaternion algebra, in canonical HNF."""

    algebra: QuaternionAlgebra
    basis: Tuple[Quaternion, ...]

    @classmethod
    def from_generators(cls, algebra: QuaternionAlgebra, generators: Sequence[Sequence]) -> "Lattice":
        gens = [quaternion(g) for g in generators]
        d = _denominator(gens)
        rows = hnf([[int(c * d) for c in g] for g in gens])
        if len(rows) != 4:
            raise ValueError(f"generators span a lattice of rank {len(rows)}, expected 4")
        return cls(algebra, tuple(tuple(Fraction(c, d) for c in row) for row in rows))

    def coordinates(self, x: Sequence) -> Tuple[Fraction, ...]:
        """Coefficients of x in the basis (basis vector s ends at coordinate s)."""
        rest = list(quaternion(x))
        coeffs = [Fraction(0)] * len(self.basis)
        for s in reversed(range(len(self.basis))):
            row = self.basis[s]
            c = rest[s] / row[s]
            coeffs[s] = c
            rest = [u - c * v for u, v in zip(rest, row)]
        if any(rest):
            raise ArithmeticError(f"{x} could not be expressed in the lattice basis")
        return tuple(coeffs)

    def contains(self, x: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def covolume(self) -> Fraction:
        """Index-style volume relative to Z^4 in the standard coordinates (product of the HNF diagonal)."""
        vol = Fraction(1)
        for s, row in enumerate(self.basis):
            vol *= row[s]
        return vol

    def index_in(self, other: "Lattice") -> Fraction:
        """[other : self] for self contained in other."""
        return self.covolume() / other.covolume()

    def scale(self, c) -> "Lattice":
        c = Fraction(c)
        return Lattice.from_generators(self.algebra, [tuple(c * u for u in b) for b in self.basis])

    def conj(self) -> "Lattice":
        return Lattice.from_generators(self.algebra, [self.algebra.conj(b) for b in self.basis])

    def left_mul(self, x: Quaternion) -> "Lattice":
        return Lattice.from_generators(self.algebra, [self.algebra.mul(x, b) for b in self.basis])

    def right_mul(self, x: Quaternion) -> "Lattice":
        return Lattice.from_generators(self.algebra, [self.algebra.mul(b, x) for b in self.basis])

    def __mul__(self, other: "Lattice") -> "Lattice":
        B = self.algebra
        return Lattice.from_generators(B, [B.mul(u, v) for u in self.basis for v in other.basis])

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.algebra, list(self.basis) + list(other.basis))

    def gram(self) -> List[List[Fraction]]:
        """Gram matrix of the reduced norm: nr(sum c_s b_s) = c^T G c."""
        B = self.algebra
        return [[B.bilinear(u, v) for v in self.basis] for u in self.basis]

    def element(self, coeffs: Sequence[int]) -> Quaternion:
        return tuple(sum((c * b[t] for c, b in zip(coeffs, self.basis)), Fraction(0)) for t in range(4))

    def norm_gcd(self) -> Fraction:
        """The rational generating nr(L) as a fractional ideal of Z."""
        B = self.algebra
        values = [B.norm(b) for b in self.basis]
        values += [2 * B.bilinear(u, v) for i, u in enumerate(self.basis) for v in self.basis[i + 1:]]
        d = _denominator([values])
        g = 0
        for v in values:
            g = gcd(g, int(v * d))
        return Fraction(g, d)

    def vectors_of_norm(self, n) -> List[Quaternion]:
        return enumerate_norm(self, n)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(c) for c in row) for row in self.basis) + "]"


def _embedding(G: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Integer rows E with E E^T close to EMBEDDING_SCALE^2 G (rounded Cholesky)."""
    n = len(G)
    q = _quadratic_decomposition(G)
    roots = [isqrt(floor(q[i][i] * EMBEDDING_SCALE ** 2)) for i in range(n)]
    rows = []
    for s in range(n):
        rows.append([roots[i] if i == s else round(roots[i] * q[i][s]) if i < s else 0 for i in range(n)])
    return rows


def lll_reduce(vectors: Sequence[Sequence[Fraction]], inner: Callable, delta=QQ(3, 4)) -> List[Tuple[Fraction, ...]]:
    """
    LLL reduction of a basis for a positive definite inner product.

    sympy reduces an integer embedding of the Gram matrix; its unimodular
    transform is applied to the exact basis, so the result spans the same
    lattice whatever the rounding.
    """
    b = [tuple(Fraction(c) for c in v) for v in vectors]
    n = len(b)
    G = [[inner(u, v) for v in b] for u in b]
    E = DomainMatrix([[ZZ(x) for x in row] for row in _embedding(G)], (n, n), ZZ)
    _, T = E.lll_transform(delta=delta)
    T = T.to_Matrix()
    dim = len(b[0])
    return [
        tuple(sum((int(T[k, s]) * b[s][t] for s in range(n)), Fraction(0)) for t in range(dim))
        for k in range(n)
    ]


def _quadratic_decomposition(G: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Coefficients q with c^T G c = sum_i q_ii (c_i + sum_{j>i} q_ij c_j)^2."""
    n = len(G)
    q = [[Fraction(x) for x in row] for row in G]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(G: Sequence[Sequence[Fraction]], n) -> List[Tuple[int, ...]]:
    """All integer vectors c with c^T G c = n (Fincke-Pohst), sorted."""
    n = Fraction(n)
    dim = len(G)
    q = _quadratic_decomposition(G)
    found = []
    coords = [0] * dim

    def search(i: int, remaining: Fraction):
        center = -sum((q[i][j] * coords[j] for j in range(i + 1, dim)), Fraction(0))
        radius = isqrt(floor(remaining / q[i][i])) + 1
        for x in range(floor(center) - radius, ceil(center) + radius + 1):
            term = q[i][i] * (x - center) ** 2
            if term > remaining:
                continue
            coords[i] = x
            if i == 0:
                if term == remaining:
                    found.append(tuple(coords))
            else:
                search(i - 1, remaining - term)
        coords[i] = 0

    if n >= 0:
        search(dim - 1, n)
    return sorted(found)


def enumerate_norm(L: Lattice, n) -> List[Quaternion]:
    """
    All elements of L of reduced norm exactly n, sorted by coordinates.

    The basis is LLL-reduced first, so the search box stays small.
    """
    B = L.algebra
    reduced = lll_reduce(L.basis, B.bilinear)
    G = [[B.bilinear(u, v) for v in reduced] for u in reduced]
    vectors = []
    for c in short_vectors(G, n):
        vectors.append(tuple(sum((ci * b[t] for ci, b in zip(c, reduced)), Fraction(0)) for t in range(4)))
    vectors.sort()
    logger.debug(f"enumerate_norm: {len(vectors)} vectors of norm {n}")
    return vectors
