"""
Specialization of measures at arithmetic points.

The definite specialization integrates eps(x) P(x, y) over Z_p^x x pZ_p, the
indefinite one eps(y) P(x, y) over Z_p x Z_p^x. Integrals are Riemann sums
over canonical ball representatives, exact mod p^min(M, m).
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..errors import PrecisionError
from ..padic import ArithmeticPoint, DualVec, PadicInt
from ..padic.mat2 import canonical_lift, inverse
from .truncated import TruncatedMeasure, matrix_pushforward

logger = logging.getLogger(__name__)

DEFINITE = "definite"
INDEFINITE = "indefinite"


def _check_region(region: str):
    if region not in (DEFINITE, INDEFINITE):
        raise ValueError(f"region must be '{DEFINITE}' or '{INDEFINITE}', got {region!r}")


def _moments(nu: TruncatedMeasure, kappa: ArithmeticPoint, mask: np.ndarray, on_x: bool) -> DualVec:
    """Functional P -> sum over masked classes of eps(x or y) P(x, y) nu[v]."""
    prec = min(nu.prec, nu.m)
    q = nu.p ** prec
    classes = nu.classes
    xs = classes.xs[mask].astype(object) % q
    ys = classes.ys[mask].astype(object) % q
    eps = np.array(kappa.eps.table(prec), dtype=object)
    residues = (classes.xs[mask] if on_x else classes.ys[mask]) % nu.p
    tame = eps[residues.astype(np.int64)]
    weights = (nu.values[mask].astype(object) * tame) % q
    n = kappa.n
    y_powers = [np.ones_like(ys)]
    for _ in range(n):
        y_powers.append((y_powers[-1] * ys) % q)
    values = []
    x_power = np.ones_like(xs)
    for i in range(n + 1):
        values.append(int(np.sum((weights * x_power % q) * y_powers[n - i])) % q)
        x_power = (x_power * xs) % q
    return DualVec(nu.p, prec, tuple(values))


def specialize(nu: TruncatedMeasure, kappa: ArithmeticPoint, region: str = DEFINITE) -> DualVec:
    """
    P -> integral of eps P over the region, on the monomial basis.

    The result has precision min(M, m).
    """
    _check_region(region)
    classes = nu.classes
    if region == DEFINITE:
        mask = (classes.xs % nu.p != 0) & (classes.ys % nu.p == 0)
        return _moments(nu, kappa, mask, on_x=True)
    mask = classes.ys % nu.p != 0
    return _moments(nu, kappa, mask, on_x=False)


def _region_mask(nu: TruncatedMeasure, level: int, region: str) -> np.ndarray:
    if level > nu.m:
        raise PrecisionError("insufficient measure level")
    if level < 1:
        raise ValueError(f"region level must be >= 1, got {level}")
    _check_region(region)
    modulus = nu.p ** level
    if region == DEFINITE:
        return nu.classes.ys % modulus == 0
    return nu.classes.xs % modulus == 0


def sigma_m(nu: TruncatedMeasure, kappa: ArithmeticPoint, level: int, region: str = DEFINITE) -> DualVec:
    """
    Integral of eps(x) P(x, y) over V(level) = {y = 0 mod p^level}.

    With region="indefinite" the integral of eps(y) P(x, y) over
    U(level) = {x = 0 mod p^level}.
    """
    mask = _region_mask(nu, level, region)
    return _moments(nu, kappa, mask, on_x=(region == DEFINITE))


def psi_integral(nu: TruncatedMeasure, kappa: ArithmeticPoint, level: int, region: str = DEFINITE) -> PadicInt:
    """Integral of the homogeneous function psi_{level, chi} against nu."""
    moments = sigma_m(nu, kappa, level, region)
    index = kappa.n if region == DEFINITE else 0
    return PadicInt(nu.p, moments.prec, moments.values[index])


def line_representatives(p: int, m: int) -> List[Tuple[int, int]]:
    """Representatives (1, y) and (p x, 1) of the p^m + p^(m-1) lines mod p^m."""
    N = p ** m
    return [(1, y) for y in range(N)] + [(p * x, 1) for x in range(N // p)]


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of the finite-level P_kappa membership test."""

    passed: bool
    level: int
    precision: int
    tested: int
    witness: Optional[Tuple[int, Tuple[int, int], int]] = None

    def lines(self) -> List[str]:
        out = [
            f"in_Pkappa = {'pass' if self.passed else 'fail'}  [mod p^{self.precision}]",
            f"in_Pkappa.level = {self.level}",
            f"in_Pkappa.tested = {self.tested}",
        ]
        if self.witness:
            level, line, value = self.witness
            out.append(f"in_Pkappa.witness = psi level {level} line {line[0]},{line[1]} value {value}")
        return out


def in_Pkappa(nu: TruncatedMeasure, kappa: ArithmeticPoint) -> MembershipReport:
    """
    Finite-level necessary condition for nu to lie in P_kappa D.

    Tests that the integral of psi_{m', chi}(gamma .) vanishes mod p^min(M, m)
    for every m' <= m and every gamma sending a line representative mod p^m
    to (1, 0). This does not prove membership at higher levels.
    """
    prec = min(nu.prec, nu.m)
    N = nu.p ** nu.m
    tested = 0
    for line in line_representatives(nu.p, nu.m):
        gamma = inverse(canonical_lift(line[0], line[1], nu.p, N), N)
        moved = matrix_pushforward(gamma, nu)
        for level in range(1, nu.m + 1):
            tested += 1
            value = psi_integral(moved, kappa, level)
            if value.value:
                logger.debug(f"P_kappa test failed at level {level}, line {line}: {value}")
                return MembershipReport(False, nu.m, prec, tested, (level, line, value.value))
    return MembershipReport(True, nu.m, prec, tested)
