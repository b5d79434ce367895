"""
Definite quaternion algebras over Q.

An algebra (a, b) has basis 1, i, j, k with i^2 = a, j^2 = b, k = ij = -ji.
Elements are 4-tuples of Fractions in that basis.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from sympy import factorint, primefactors
from sympy.functions.combinatorial.numbers import legendre_symbol

logger = logging.getLogger(__name__)

INFINITY = "inf"

Quaternion = Tuple[Fraction, Fraction, Fraction, Fraction]
Place = Union[int, str]


def quaternion(*coords) -> Quaternion:
    if len(coords) == 1:
        coords = tuple(coords[0])
    if len(coords) != 4:
        raise ValueError(f"a quaternion has 4 coordinates, got {len(coords)}")
    return tuple(Fraction(c) for c in coords)


def _square_class(x: Fraction) -> int:
    """An integer in the same square class as x."""
    x = Fraction(x)
    return x.numerator * x.denominator


def _split_valuation(x: int, p: int) -> Tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(a, b, v: Place) -> int:
    """
    Hilbert symbol (a, b)_v of two nonzero rationals at a place v.

    Returns -1 exactly when the quaternion algebra (a, b) is ramified at v.
    """
    a, b = _square_class(a), _square_class(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if v == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_valuation(a, v)
    beta, w = _split_valuation(b, v)
    if v == 2:
        def e(t):
            return ((t - 1) // 2) % 2

        def omega(t):
            return ((t * t - 1) // 8) % 2

        exponent = e(u) * e(w) + alpha * omega(w) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * (v - 1) // 2) % 2 else 1
    return sign * int(legendre_symbol(u % v, v)) ** beta * int(legendre_symbol(w % v, v)) ** alpha


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int

    def candidate_places(self) -> List[Place]:
        primes = sorted(set(primefactors(2 * abs(self.a) * abs(self.b))))
        return primes + [INFINITY]

    def ramified_places(self) -> List[Place]:
        return [v for v in self.candidate_places() if hilbert_symbol(self.a, self.b, v) == -1]

    @property
    def discriminant(self) -> int:
        D = 1
        for v in self.ramified_places():
            if v != INFINITY:
                D *= v
        return D

    @property
    def is_definite(self) -> bool:
        return self.a < 0 and self.b < 0

    def one(self) -> Quaternion:
        return quaternion(1, 0, 0, 0)

    def mul(self, x: Quaternion, y: Quaternion) -> Quaternion:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x: Quaternion) -> Quaternion:
        return (x[0], -x[1], -x[2], -x[3])

    def norm(self, x: Quaternion) -> Fraction:
        return x[0] ** 2 - self.a * x[1] ** 2 - self.b * x[2] ** 2 + self.a * self.b * x[3] ** 2

    @staticmethod
    def trace(x: Quaternion) -> Fraction:
        return 2 * x[0]

    def inverse(self, x: Quaternion) -> Quaternion:
        nr = self.norm(x)
        if nr == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return tuple(c / nr for c in self.conj(x))

    def norm_form_matrix(self) -> List[List[Fraction]]:
        """Gram matrix of nr in the standard basis (nr(x) = x^T G x)."""
        return [
            [Fraction(1), 0, 0, 0],
            [0, Fraction(-self.a), 0, 0],
            [0, 0, Fraction(-self.b), 0],
            [0, 0, 0, Fraction(self.a * self.b)],
        ]

    def bilinear(self, x: Quaternion, y: Quaternion) -> Fraction:
        """Polar form (x, y) = (nr(x + y) - nr(x) - nr(y)) / 2."""
        return x[0] * y[0] - self.a * x[1] * y[1] - self.b * x[2] * y[2] + self.a * self.b * x[3] * y[3]

    def __str__(self):
        return f"({self.a},{self.b})"


# Standard (a, b) for the discriminants that ship with a maximal order.
ALGEBRA_TABLE: Dict[int, Tuple[int, int]] = {
    2: (-1, -1),
    3: (-1, -3),
    5: (-2, -5),
    7: (-1, -7),
    11: (-1, -11),
    13: (-2, -13),
}


def _check_discriminant(D: int):
    if D < 2:
        raise ValueError("indefinite discriminant")
    factors = factorint(D)
    if any(e > 1 for e in factors.values()):
        raise ValueError(f"discriminant {D} is not square-free")
    if len(factors) % 2 == 0:
        raise ValueError("indefinite discriminant")


def build_algebra(D: int, search_bound: int = 200) -> QuaternionAlgebra:
    """
    Definite quaternion algebra ramified exactly at infinity and the primes of D.

    Raises:
        ValueError: "indefinite discriminant" if D has an even number of
            prime factors; also if D is not square-free.
    """
    _check_discriminant(D)
    target = sorted(primefactors(D)) + [INFINITY]
    candidates: Iterable[Tuple[int, int]]
    if D in ALGEBRA_TABLE:
        candidates = [ALGEBRA_TABLE[D]]
    else:
        candidates = ((-a, -b) for a in range(1, search_bound) for b in range(a, search_bound))
    for a, b in candidates:
        B = QuaternionAlgebra(a, b)
        if B.ramified_places() == target:
            logger.info(f"Quaternion algebra of discriminant {D}: (a,b) = {B}")
            return B
    raise ValueError(f"no algebra (a,b) with |a|,|b| < {search_bound} has discriminant {D}")


def hilbert_reciprocity(B: QuaternionAlgebra) -> bool:
    product = 1
    for v in B.candidate_places():
        product *= hilbert_symbol(B.a, B.b, v)
    return product == 1
