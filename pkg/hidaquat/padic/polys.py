"""
Homogeneous polynomials of degree n and their duals.

A HomPoly stores the coefficients c_0..c_n of sum c_i x^i y^(n-i); a DualVec
stores the values of a functional on the same monomials. GL_2 acts on the
right of polynomials by (P|g)(x, y) = P(ax + by, cx + dy) and on the left of
the dual by (g phi)(P) = phi(P|g).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .mat2 import Mat2, reduce

logger = logging.getLogger(__name__)


def _dtype(q: int, n: int):
    return np.int64 if (q - 1) ** 2 * (n + 1) < 2 ** 62 else object


def _linear_powers(a: int, b: int, n: int, q: int) -> List[List[int]]:
    """Coefficients of (a t + b)^e in t for e = 0..n, constant term first."""
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        row = [prev[0] * b % q]
        row += [(prev[s] * b + prev[s - 1] * a) % q for s in range(1, len(prev))]
        row.append(prev[-1] * a % q)
        rows.append(row)
    return rows


def _convolve(u: List[int], v: List[int], q: int, dtype) -> np.ndarray:
    if dtype is np.int64:
        return np.convolve(np.array(u, dtype=np.int64), np.array(v, dtype=np.int64)) % q
    out = [0] * (len(u) + len(v) - 1)
    for s, x in enumerate(u):
        for t, y in enumerate(v):
            out[s + t] += x * y
    return np.array([c % q for c in out], dtype=object)


@lru_cache(maxsize=65536)
def action_matrix(g: Mat2, n: int, q: int) -> np.ndarray:
    """
    Matrix A of P -> P|g on the monomial basis x^i y^(n-i), mod q.

    Column i holds the coefficients of (ax + by)^i (cx + dy)^(n-i), read in
    t = x/y from the constant term up.
    """
    a, b, c, d = reduce(g, q)
    dtype = _dtype(q, n)
    left = _linear_powers(a, b, n, q)
    right = _linear_powers(c, d, n, q)
    A = np.zeros((n + 1, n + 1), dtype=dtype)
    for i in range(n + 1):
        A[:, i] = _convolve(left[i], right[n - i], q, dtype)
    A.flags.writeable = False
    return A


def dual_matrix(g: Mat2, n: int, q: int) -> np.ndarray:
    """Matrix of phi -> g phi on the dual monomial basis (transpose of action_matrix)."""
    return action_matrix(g, n, q).T


@dataclass(frozen=True)
class HomPoly:
    p: int
    prec: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        q = self.p ** self.prec
        object.__setattr__(self, "coeffs", tuple(int(c) % q for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, p: int, prec: int, n: int, i: int) -> "HomPoly":
        """x^i y^(n-i)."""
        return cls(p, prec, tuple(1 if s == i else 0 for s in range(n + 1)))

    def evaluate(self, x: int, y: int) -> int:
        q = self.p ** self.prec
        return sum(c * pow(x, i, q) * pow(y, self.degree - i, q) for i, c in enumerate(self.coeffs)) % q


@dataclass(frozen=True)
class DualVec:
    p: int
    prec: int
    values: Tuple[int, ...]

    def __post_init__(self):
        q = self.p ** self.prec
        object.__setattr__(self, "values", tuple(int(v) % q for v in self.values))

    @property
    def degree(self) -> int:
        return len(self.values) - 1

    def __call__(self, P: HomPoly) -> int:
        if P.degree != self.degree:
            raise ValueError(f"degree mismatch: functional of degree {self.degree}, polynomial of degree {P.degree}")
        q = self.p ** min(self.prec, P.prec)
        return sum(v * c for v, c in zip(self.values, P.coeffs)) % q

    def is_zero(self) -> bool:
        return not any(self.values)

    def reduce(self, prec: int) -> "DualVec":
        return DualVec(self.p, min(prec, self.prec), self.values)


def poly_act(P: HomPoly, g: Sequence[int]) -> HomPoly:
    """P|g, with (P|g)|h = P|(gh)."""
    q = P.p ** P.prec
    A = action_matrix(reduce(g, q), P.degree, q)
    return HomPoly(P.p, P.prec, tuple(A.dot(np.array(P.coeffs, dtype=A.dtype)) % q))


def dual_act(g: Sequence[int], phi: DualVec) -> DualVec:
    """g phi, with g(h phi) = (gh) phi."""
    q = phi.p ** phi.prec
    A = dual_matrix(reduce(g, q), phi.degree, q)
    return DualVec(phi.p, phi.prec, tuple(A.dot(np.array(phi.values, dtype=A.dtype)) % q))
