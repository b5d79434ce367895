"""
Local splittings B (x) Z_l = M_2(Z_l) modulo l^N.

i_l(i) = [[0, a], [1, 0]] and i_l(j) = [[s, -a r], [r, -s]] with
s^2 - a r^2 = b. The construction never needs a square root of a itself.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from ..errors import VerificationError
from ..padic import hensel_root
from ..padic.mat2 import Mat2, det, mul, reduce
from .algebra import Quaternion, QuaternionAlgebra

logger = logging.getLogger(__name__)


def _sqrt_mod(c: int, ell: int, prec: int) -> int:
    """Smallest square root of a nonzero square c mod ell, lifted to ell^prec."""
    for s in range(1, ell):
        if (s * s - c) % ell == 0:
            return hensel_root([-c, 0, 1], s, ell, prec).value
    raise ValueError(f"{c} is not a square mod {ell}")


def companion_images(B: QuaternionAlgebra, ell: int, prec: int) -> Tuple[Mat2, Mat2]:
    """Images of i and j modulo ell^prec, for an odd prime ell not dividing ab."""
    q = ell ** prec
    for r in range(ell):
        c = (B.b + B.a * r * r) % ell
        if c and pow(c, (ell - 1) // 2, ell) == 1:
            s = _sqrt_mod((B.b + B.a * r * r) % q, ell, prec)
            I = reduce((0, B.a, 1, 0), q)
            J = reduce((s, -B.a * r, r, -s), q)
            return I, J
    raise ValueError(f"no splitting of {B} found mod {ell}")


@dataclass(frozen=True)
class SplittingData:
    """The images of i and j under i_p, modulo p^prec."""

    p: int
    prec: int
    I: Mat2
    J: Mat2

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    @property
    def K(self) -> Mat2:
        return mul(self.I, self.J, self.modulus)

    def image(self, x: Quaternion, prec: int = None) -> Mat2:
        """i_p(x) for a p-integral quaternion x."""
        q = self.p ** (self.prec if prec is None else min(prec, self.prec))
        coords = []
        for c in x:
            c = Fraction(c)
            if c.denominator % self.p == 0:
                raise ValueError(f"{x} is not {self.p}-integral")
            coords.append(c.numerator * pow(c.denominator, -1, q) % q)
        x0, x1, x2, x3 = coords
        K = self.K
        return tuple((x0 * (1 if t in (0, 3) else 0) + x1 * self.I[t] + x2 * self.J[t] + x3 * K[t]) % q for t in range(4))

    def check(self, B: QuaternionAlgebra, basis: Sequence[Quaternion]):
        """
        Certify the splitting relations and integrality over an order basis.

        Raises:
            VerificationError: if any relation fails.
        """
        q = self.modulus
        I, J = self.I, self.J
        if mul(I, I, q) != reduce((B.a, 0, 0, B.a), q):
            raise VerificationError(f"i_p(i)^2 != a mod {self.p}^{self.prec}")
        if mul(J, J, q) != reduce((B.b, 0, 0, B.b), q):
            raise VerificationError(f"i_p(j)^2 != b mod {self.p}^{self.prec}")
        IJ, JI = mul(I, J, q), mul(J, I, q)
        if reduce(tuple(u + v for u, v in zip(IJ, JI)), q) != (0, 0, 0, 0):
            raise VerificationError("i_p(i) and i_p(j) do not anticommute")
        images = [self.image(x) for x in basis]
        if _det4([[m[t] for t in range(4)] for m in images]) % self.p == 0:
            raise VerificationError("splitting is not surjective onto M_2(Z_p)")
        for x in basis:
            nr = B.norm(x)
            if (det(self.image(x)) - nr.numerator * pow(nr.denominator, -1, q)) % q:
                raise VerificationError(f"det(i_p(x)) != nr(x) for x = {x}")


def _det4(rows: List[List[int]]) -> int:
    return int(DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (4, 4), ZZ).det())


def splitting_at_p(B: QuaternionAlgebra, order_basis: Sequence[Quaternion], p: int, prec: int) -> SplittingData:
    """
    The splitting i_p modulo p^prec, certified on the order basis.

    Raises:
        ValueError: "p must split B" if p ramifies in B.
    """
    if B.discriminant % p == 0:
        raise ValueError("p must split B")
    I, J = companion_images(B, p, prec)
    S = SplittingData(p, prec, I, J)
    S.check(B, order_basis)
    logger.info(f"Splitting at p={p} mod {p}^{prec}: i -> {I}, j -> {J}")
    return S
