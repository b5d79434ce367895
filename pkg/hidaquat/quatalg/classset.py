"""
Right-ideal class sets of Eichler orders.

Classes are found by l-neighbour traversal from the order itself; each new
ideal is tested against the known representatives by searching I conj(J)
for an element of norm nr(I) nr(J). Traversal stops once the Eichler mass
formula is met exactly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Optional, TextIO, Tuple

from sympy import nextprime, primefactors

from ..errors import VerificationError
from .algebra import Quaternion, QuaternionAlgebra
from .lattice import Lattice, enumerate_norm
from .orders import QuatOrder, certify_order, reduced_discriminant

logger = logging.getLogger(__name__)


def ideal_norm(I: Lattice) -> Fraction:
    """Reduced norm of a locally principal ideal: gcd of the norms of its elements."""
    return I.norm_gcd()


def left_order(I: Lattice) -> Lattice:
    """O_l(I) = I conj(I) / nr(I)."""
    return (I * I.conj()).scale(1 / ideal_norm(I))


def unit_group(I: Lattice) -> List[Quaternion]:
    """All units of the left order of I, +-1 included."""
    return enumerate_norm(left_order(I), 1)


def is_equivalent(I: Lattice, J: Lattice) -> Optional[Quaternion]:
    """A witness alpha with I = alpha J, or None when the classes differ."""
    nI, nJ = ideal_norm(I), ideal_norm(J)
    for x in enumerate_norm(I * J.conj(), nI * nJ):
        return tuple(c / nJ for c in x)
    return None


def neighbors(I: Lattice, order: QuatOrder, ell: int) -> List[Lattice]:
    """
    The ell + 1 right ideals J = x O + ell I of index ell^2 in I.

    Raises:
        VerificationError: if the count is not ell + 1.
    """
    B = I.algebra
    nI = ideal_norm(I)
    target = I.covolume() * ell ** 2
    found = []
    for coeffs in product(range(ell), repeat=4):
        if not any(coeffs):
            continue
        x = I.element(coeffs)
        quotient = B.norm(x) / nI
        if quotient.denominator != 1 or quotient.numerator % ell:
            continue
        gens = [B.mul(x, o) for o in order.basis] + [tuple(ell * c for c in b) for b in I.basis]
        J = Lattice.from_generators(B, gens)
        if J.covolume() == target and J not in found:
            found.append(J)
    if len(found) != ell + 1:
        raise VerificationError(f"found {len(found)} {ell}-neighbours, expected {ell + 1}")
    return found


@dataclass(frozen=True)
class IdealClass:
    index: int
    ideal: Lattice
    norm: Fraction
    left_order: Lattice
    units: Tuple[Quaternion, ...]

    @classmethod
    def from_ideal(cls, index: int, I: Lattice) -> "IdealClass":
        return cls(index, I, ideal_norm(I), left_order(I), tuple(unit_group(I)))

    @property
    def unit_count(self) -> int:
        return len(self.units)


def eichler_mass(D: int, M: int) -> Fraction:
    """(1/24) prod_{l | D} (l - 1) * M prod_{l | M} (1 + 1/l)."""
    mass = Fraction(1, 24)
    for ell in map(int, primefactors(D)):
        mass *= ell - 1
    mass *= M
    for ell in map(int, primefactors(M)):
        mass *= Fraction(ell + 1, ell)
    return mass


def neighbor_prime(D: int, M: int, p: int = 1) -> int:
    """Smallest prime not dividing D M p."""
    ell = 2
    while (D * M * p) % ell == 0:
        ell = int(nextprime(ell))
    return ell


@dataclass(frozen=True)
class ClassSetDatum:
    """Right-ideal class representatives of an Eichler order."""

    order: QuatOrder
    classes: Tuple[IdealClass, ...]
    mass: Fraction

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.order.algebra

    @property
    def D(self) -> int:
        return self.algebra.discriminant

    @property
    def M(self) -> int:
        return self.order.level

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i: int) -> IdealClass:
        return self.classes[i]

    def certify(self):
        """
        Check pairwise inequivalence, the exact mass and the left-order discriminants.

        Raises:
            VerificationError: on the first failed check.
        """
        expected = eichler_mass(self.D, self.M)
        mass = sum((Fraction(1, c.unit_count) for c in self.classes), Fraction(0))
        if mass != expected:
            raise VerificationError(f"mass {mass} != {expected}")
        for c in self.classes:
            if reduced_discriminant(self.algebra, c.left_order) != self.D * self.M:
                raise VerificationError(f"left order of class {c.index} has the wrong discriminant")
        for i, a in enumerate(self.classes):
            for b in self.classes[i + 1:]:
                if is_equivalent(a.ideal, b.ideal) is not None:
                    raise VerificationError(f"classes {a.index} and {b.index} are equivalent")


def class_set(order: QuatOrder, p: int = 1, max_ideals: int = 5000) -> ClassSetDatum:
    """
    Complete right-ideal class set of an Eichler order by l-neighbour traversal.

    Representatives have norm prime to p, so their p-components are trivial.

    Raises:
        VerificationError: if the mass is not reached within max_ideals
            visited ideals, or is overshot.
    """
    B = order.algebra
    D, M = B.discriminant, order.level
    target = eichler_mass(D, M)
    ell = neighbor_prime(D, M, p)
    logger.info(f"Class set traversal for D={D}, M={M} with {ell}-neighbours, target mass {target}")
    classes = [IdealClass.from_ideal(0, order.lattice)]
    mass = Fraction(1, classes[0].unit_count)
    frontier = [order.lattice]
    visited = 0
    while mass < target:
        if not frontier or visited >= max_ideals:
            raise VerificationError(f"mass {mass} of {len(classes)} classes did not reach {target}")
        I = frontier.pop(0)
        visited += 1
        for J in neighbors(I, order, ell):
            if any(is_equivalent(J, c.ideal) is not None for c in classes):
                continue
            new = IdealClass.from_ideal(len(classes), J)
            classes.append(new)
            mass += Fraction(1, new.unit_count)
            frontier.append(J)
            logger.debug(f"class {new.index}: norm {new.norm}, {new.unit_count} units")
            if mass >= target:
                break
    if mass != target:
        raise VerificationError(f"mass overshoot: {mass} > {target}")
    datum = ClassSetDatum(order, tuple(classes), mass)
    logger.info(f"Class set for D={D}, M={M}: {len(classes)} classes, unit group orders {[c.unit_count for c in classes]}")
    return datum


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _write_lattice(L: Lattice, stream: TextIO):
    for row in L.basis:
        stream.write(" ".join(_fmt(c) for c in row) + "\n")


def write_classset(datum: ClassSetDatum, stream: TextIO, p: int = 0, prec: int = 0):
    """Header `D M p M_prec`, the algebra, the order, then one block of four rows per class."""
    B = datum.algebra
    stream.write(f"{datum.D} {datum.M} {p} {prec}\n")
    stream.write(f"algebra {B.a} {B.b}\n")
    stream.write("order\n")
    _write_lattice(datum.order.lattice, stream)
    for c in datum.classes:
        stream.write(f"class {c.index} norm {_fmt(c.norm)}\n")
        _write_lattice(c.ideal, stream)


def read_classset(lines: Iterable[str]) -> Tuple[ClassSetDatum, int, int]:
    """
    Parse and re-verify a class-set file.

    Returns:
        (datum, p, prec) where p and prec echo the header.

    Raises:
        ValueError: on malformed input.
        VerificationError: if the mass or inequivalence checks fail.
    """
    rows = [line.split() for line in lines if line.strip() and not line.startswith("#")]
    try:
        D, M, p, prec = (int(s) for s in rows[0])
        if rows[1][0] != "algebra" or rows[2][0] != "order":
            raise ValueError("expected 'algebra' and 'order' sections")
        B = QuaternionAlgebra(int(rows[1][1]), int(rows[1][2]))
        if B.discriminant != D:
            raise ValueError(f"algebra {B} has discriminant {B.discriminant}, header says {D}")

        def lattice(block):
            return Lattice.from_generators(B, [[Fraction(c) for c in row] for row in block])

        order_lattice = lattice(rows[3:7])
        ideals = []
        pos = 7
        while pos < len(rows):
            if rows[pos][0] != "class":
                raise ValueError(f"expected a class block, got {' '.join(rows[pos])}")
            ideals.append(lattice(rows[pos + 1:pos + 5]))
            pos += 5
    except (IndexError, ValueError) as e:
        logger.error(f"Error parsing class-set file: {e}")
        raise ValueError(f"malformed class-set file: {e}")
    certify_order(B, order_lattice, D * M)
    order = QuatOrder(B, order_lattice, M)
    classes = tuple(IdealClass.from_ideal(i, I) for i, I in enumerate(ideals))
    datum = ClassSetDatum(order, classes, sum((Fraction(1, c.unit_count) for c in classes), Fraction(0)))
    datum.certify()
    logger.info(f"Loaded class set with {len(classes)} classes for D={D}, M={M}")
    return datum, p, prec
