"""
Maximal and Eichler orders.

Maximal orders ship as a table for small discriminants and are certified
(closure, unit, reduced discriminant) every time they are loaded. Eichler
orders of level M are cut out of a maximal order by the lower-left entry of
local splittings at the odd primes dividing M, and by a cyclic right ideal
of norm 2^e at 2.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Sequence, Tuple

from sympy import QQ, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.ntheory.modular import crt

from ..errors import VerificationError
from .algebra import ALGEBRA_TABLE, Quaternion, QuaternionAlgebra, quaternion
from .lattice import Lattice
from .splitting import SplittingData, companion_images

logger = logging.getLogger(__name__)

_H = Fraction(1, 2)
_Q = Fraction(1, 4)

MAXIMAL_ORDER_TABLE: Dict[int, Tuple[Quaternion, ...]] = {
    2: ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (_H, _H, _H, _H)),
    3: ((1, 0, 0, 0), (0, 1, 0, 0), (_H, 0, _H, 0), (0, _H, 0, _H)),
    5: ((1, 0, 0, 0), (_H, 0, _H, _H), (0, _Q, _H, _Q), (0, 0, 1, 0)),
    7: ((1, 0, 0, 0), (0, 1, 0, 0), (_H, 0, _H, 0), (0, _H, 0, _H)),
    11: ((1, 0, 0, 0), (0, 1, 0, 0), (0, _H, _H, 0), (_H, 0, 0, _H)),
    13: ((1, 0, 0, 0), (_H, 0, _H, _H), (0, _Q, _H, _Q), (0, 0, 1, 0)),
}


@dataclass(frozen=True)
class QuatOrder:
    """An order of a definite quaternion algebra, with its Eichler level."""

    algebra: QuaternionAlgebra
    lattice: Lattice
    level: int = 1
    # (M, lower-left functional mod M on the maximal order basis)
    orientation: Tuple[int, Tuple[int, ...]] = (1, (0, 0, 0, 0))

    @property
    def basis(self) -> Tuple[Quaternion, ...]:
        return self.lattice.basis

    def gram(self) -> List[List[Fraction]]:
        return self.lattice.gram()

    @property
    def discriminant(self) -> int:
        return reduced_discriminant(self.algebra, self.lattice)


def _det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    entries = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]
    d = DomainMatrix(entries, (n, n), QQ).det()
    return Fraction(int(QQ.numer(d)), int(QQ.denom(d)))


def reduced_discriminant(B: QuaternionAlgebra, L: Lattice) -> int:
    """d with d^2 = |det(trd(e_s conj(e_t)))| over the basis of L."""
    disc = abs(_det([[2 * B.bilinear(u, v) for v in L.basis] for u in L.basis]))
    if disc.denominator != 1 or isqrt(disc.numerator) ** 2 != disc.numerator:
        raise VerificationError(f"discriminant {disc} of {L} is not a square integer")
    return isqrt(disc.numerator)


def is_order(B: QuaternionAlgebra, L: Lattice) -> bool:
    if not L.contains(B.one()):
        return False
    return all(L.contains(B.mul(u, v)) for u in L.basis for v in L.basis)


def certify_order(B: QuaternionAlgebra, L: Lattice, expected_discriminant: int):
    """
    Raises:
        VerificationError: if L is not an order of the expected discriminant.
    """
    if not is_order(B, L):
        raise VerificationError(f"{L} is not closed under multiplication")
    d = reduced_discriminant(B, L)
    if d != expected_discriminant:
        raise VerificationError(f"reduced discriminant {d} != {expected_discriminant}")


def maximal_order(B: QuaternionAlgebra) -> QuatOrder:
    """
    Maximal order from the built-in table, certified.

    Raises:
        ValueError: if the discriminant is not in the table.
    """
    D = B.discriminant
    if D not in MAXIMAL_ORDER_TABLE or ALGEBRA_TABLE[D] != (B.a, B.b):
        raise ValueError(f"no built-in maximal order for discriminant {D}; supply a class-set file")
    L = Lattice.from_generators(B, MAXIMAL_ORDER_TABLE[D])
    certify_order(B, L, D)
    logger.info(f"Maximal order for D={D} certified: {L}")
    return QuatOrder(B, L)


def order_from_lattice(B: QuaternionAlgebra, L: Lattice, level: int = 1) -> QuatOrder:
    """Wrap a user-supplied lattice as an order, certifying discriminant D*level."""
    certify_order(B, L, B.discriminant * level)
    return QuatOrder(B, L, level)


def _local_functional(R: QuatOrder, ell: int, e: int) -> List[int]:
    """Functional mod ell^e on the basis of R whose kernel is the local Eichler order."""
    if ell == 2:
        return _dyadic_functional(R, e)
    I, J = companion_images(R.algebra, ell, e)
    S = SplittingData(ell, e, I, J)
    return [S.image(x)[2] for x in R.basis]


def _dyadic_functional(R: QuatOrder, e: int) -> List[int]:
    """
    The quotient map R -> R/E = Z/2^e for the local Eichler order E at 2.

    The companion splitting is not integral on R at 2, so E is built from a
    cyclic right ideal instead: E = Z + alpha R + 2^e R, with alpha primitive
    at 2 and 2^e | nr(alpha).
    """
    B = R.algebra
    q = 2 ** e
    alpha = None
    n = q
    while alpha is None:
        for x in R.lattice.vectors_of_norm(n):
            if any(c % 2 for c in R.lattice.coordinates(x)):
                alpha = x
                break
        n += q
    gens = [B.one()] + [B.mul(alpha, u) for u in R.basis] + [tuple(q * c for c in u) for u in R.basis]
    E = Lattice.from_generators(B, gens)
    if E.index_in(R.lattice) != q:
        raise VerificationError(f"dyadic Eichler lattice has index {E.index_in(R.lattice)}, expected {q}")
    generator = next(u for u in R.basis if not E.contains(tuple((q // 2) * c for c in u)))
    functional = []
    for u in R.basis:
        k = next(k for k in range(q) if E.contains(tuple(c - k * g for c, g in zip(u, generator))))
        functional.append(k)
    logger.debug(f"Dyadic Eichler functional mod {q} from alpha={alpha}: {functional}")
    return functional


def eichler_order(R: QuatOrder, M: int) -> QuatOrder:
    """
    Eichler order of level M inside the maximal order R.

    The order of x in R whose local images at every l | M are upper
    triangular modulo l^(ord_l M). At odd l this is read off the companion
    splitting; at l = 2 it comes from a cyclic right ideal of norm 2^e.

    Raises:
        ValueError: if M shares a factor with D.
    """
    if M == 1:
        return R
    B = R.algebra
    if any(B.discriminant % ell == 0 for ell in factorint(M)):
        raise ValueError(f"Eichler level {M} must be prime to D={B.discriminant}")
    residues: List[List[int]] = [[] for _ in range(4)]
    moduli, functionals = [], []
    for ell, e in sorted(factorint(M).items()):
        f = _local_functional(R, ell, e)
        q = ell ** e
        s = next(i for i in range(4) if f[i] % ell)
        unit = [0] * 4
        unit[s] = pow(f[s], -1, q)
        for t in range(4):
            residues[t].append(unit[t])
        moduli.append(q)
        functionals.append(f)
    # c* with f(c*) = 1 mod M, and f itself, glued by CRT
    c_star = [int(crt(moduli, residues[t])[0]) for t in range(4)]
    f_glued = tuple(int(crt(moduli, [fl[t] for fl in functionals])[0]) for t in range(4))
    generators = []
    for s in range(4):
        v = [0] * 4
        v[s] = M
        generators.append(v)
        v = [-f_glued[s] * c for c in c_star]
        v[s] += 1
        generators.append(v)
    gens = [R.lattice.element(v) for v in generators]
    L = Lattice.from_generators(B, gens)
    certify_order(B, L, B.discriminant * M)
    logger.info(f"Eichler order of level {M} certified: {L}")
    return QuatOrder(B, L, M, (M, tuple(f % M for f in f_glued)))


def order_builder(B: QuaternionAlgebra, M: int = 1) -> Tuple[QuatOrder, QuatOrder]:
    """(maximal order, Eichler order of level M)."""
    R = maximal_order(B)
    return R, eichler_order(R, M)
