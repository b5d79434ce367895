"""
Brandt elements realizing the Hecke operators.

For classes i, j the set Theta_n(i, j) consists of the b in I_i I_j^-1 of
reduced norm n nr(I_i)/nr(I_j), taken modulo right multiplication by the
unit group of O_l(I_j). Summing over j gives sigma_1(n) elements per class.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import divisor_sigma

from ..errors import VerificationError
from ..padic.mat2 import Mat2, det
from .algebra import Quaternion
from .classset import ClassSetDatum
from .lattice import enumerate_norm
from .splitting import SplittingData

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BrandtElement:
    source: int
    target: int
    b: Quaternion
    image: Optional[Mat2] = None


def _orbit_representatives(classes: ClassSetDatum, i: int, j: int, n: int) -> List[Quaternion]:
    B = classes.algebra
    I, J = classes[i], classes[j]
    vectors = enumerate_norm(I.ideal * J.ideal.conj(), n * I.norm * J.norm)
    units = J.units
    reps = set()
    for x in vectors:
        b = tuple(c / J.norm for c in x)
        reps.add(min(B.mul(b, u) for u in units))
    if len(vectors) != len(reps) * len(units):
        raise VerificationError(f"Brandt orbits for n={n}, pair ({i},{j}) are not free")
    return sorted(reps)


def hecke_elements(classes: ClassSetDatum, n: int, splitting: SplittingData = None,
                   workers: int = 1) -> Dict[Tuple[int, int], List[BrandtElement]]:
    """
    Brandt elements of norm n for every ordered pair of classes.

    Returns:
        {(i, j): [BrandtElement, ...]} with elements sorted by coordinates.

    Raises:
        ValueError: if n is not coprime to D M.
        VerificationError: if a row does not have sigma_1(n) elements.
    """
    if n < 1 or gcd(n, classes.D * classes.M) != 1:
        raise ValueError(f"n={n} must be a positive integer coprime to DM={classes.D * classes.M}")
    h = len(classes)
    pairs = [(i, j) for i in range(h) for j in range(h)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ij: _orbit_representatives(classes, ij[0], ij[1], n), pairs))
    else:
        results = [_orbit_representatives(classes, i, j, n) for i, j in pairs]
    elements: Dict[Tuple[int, int], List[BrandtElement]] = {}
    for (i, j), reps in zip(pairs, results):
        elements[(i, j)] = [
            BrandtElement(i, j, b, splitting.image(b) if splitting is not None else None) for b in reps
        ]
    expected = int(divisor_sigma(n))
    for i in range(h):
        count = sum(len(elements[(i, j)]) for j in range(h))
        if count != expected:
            raise VerificationError(f"class {i} has {count} Brandt elements of norm {n}, expected {expected}")
    logger.debug(f"Brandt elements of norm {n}: {[[len(elements[(i, j)]) for j in range(h)] for i in range(h)]}")
    return elements


def brandt_matrix(elements: Dict[Tuple[int, int], List[BrandtElement]], h: int) -> List[List[int]]:
    """Counts |Theta_n(i, j)| as an integer matrix."""
    return [[len(elements[(i, j)]) for j in range(h)] for i in range(h)]


def coset_type(x: Mat2, p: int) -> Optional[int]:
    """
    Left coset alpha GL_2(Z_p) containing x, for det(x) = p * unit.

    Returns:
        t with alpha = [[p, t], [0, 1]], or None for alpha = [[1, 0], [0, p]].

    Raises:
        ValueError: if det(x) does not have valuation exactly 1.
    """
    d = det(x)
    if d % p or d % (p * p) == 0:
        raise ValueError(f"{x} does not have determinant p * unit")
    a, b, c, e = (v % p for v in x)
    if c == 0 and e == 0:
        return None
    if c:
        return a * pow(c, -1, p) % p
    return b * pow(e, -1, p) % p


def coset_quotient(x: Mat2, t: Optional[int], p: int, q: int) -> Mat2:
    """w = alpha^-1 x in GL_2(Z_p), reduced mod q/p."""
    x = tuple(v % q for v in x)
    qq = q // p
    if t is None:
        return (x[0] % qq, x[1] % qq, (x[2] // p) % qq, (x[3] // p) % qq)
    top0, top1 = x[0] - t * x[2], x[1] - t * x[3]
    if top0 % p or top1 % p:
        raise ValueError(f"{x} is not in the coset of t={t}")
    return ((top0 // p) % qq, (top1 // p) % qq, x[2] % qq, x[3] % qq)
