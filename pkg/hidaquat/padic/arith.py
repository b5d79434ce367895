"""
Finite-precision p-adic arithmetic.

Residues modulo p^M, Teichmuller lifts, tame characters and tame arithmetic
points. All values are immutable and every function is pure.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from sympy import isprime

logger = logging.getLogger(__name__)

IntLike = Union[int, "PadicInt"]


def check_prime(p: int) -> int:
    """Validate the standing hypothesis p >= 5 prime and return p."""
    if p < 5 or not isprime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")
    return p


def valuation(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer (x = 0 raises)."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    """An element of Z/p^M viewed as a truncated p-adic integer."""

    p: int
    prec: int
    value: int

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError(f"precision must be >= 1, got {self.prec}")
        object.__setattr__(self, "value", int(self.value) % (self.p ** self.prec))

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    def _operand(self, other) -> Tuple[int, int]:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError(f"mixed primes {self.p} and {other.p}")
            return other.value, min(self.prec, other.prec)
        if isinstance(other, int):
            return other, self.prec
        return NotImplemented, 0

    def __add__(self, other):
        value, prec = self._operand(other)
        if value is NotImplemented:
            return NotImplemented
        return PadicInt(self.p, prec, self.value + value)

    __radd__ = __add__

    def __sub__(self, other):
        value, prec = self._operand(other)
        if value is NotImplemented:
            return NotImplemented
        return PadicInt(self.p, prec, self.value - value)

    def __rsub__(self, other):
        value, prec = self._operand(other)
        if value is NotImplemented:
            return NotImplemented
        return PadicInt(self.p, prec, value - self.value)

    def __neg__(self):
        return PadicInt(self.p, self.prec, -self.value)

    def __mul__(self, other):
        value, prec = self._operand(other)
        if value is NotImplemented:
            return NotImplemented
        return PadicInt(self.p, prec, self.value * value)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.p, self.prec, pow(self.value, e, self.modulus))

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ValueError(f"{self.value} is not a unit mod {self.p}")
        return PadicInt(self.p, self.prec, pow(self.value, -1, self.modulus))

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def valuation(self) -> int:
        """Valuation, capped at the precision for zero."""
        if self.value == 0:
            return self.prec
        return valuation(self.value, self.p)

    def reduce(self, prec: int) -> "PadicInt":
        return PadicInt(self.p, min(prec, self.prec), self.value)

    def signed(self) -> int:
        """Representative in (-p^M/2, p^M/2]."""
        q = self.modulus
        return self.value - q if self.value > q // 2 else self.value

    def __int__(self):
        return self.value

    def __eq__(self, other):
        value, prec = self._operand(other)
        if value is NotImplemented:
            return NotImplemented
        return (self.value - value) % (self.p ** prec) == 0

    def __hash__(self):
        return hash((self.p, self.prec, self.value))

    def __repr__(self):
        return f"PadicInt({self.value} mod {self.p}^{self.prec})"


def teichmuller(u: int, p: int, prec: int) -> PadicInt:
    """
    Teichmuller lift of a unit residue.

    Iterates x -> x^p modulo p^prec; the sequence is stationary after at
    most prec steps.

    Raises:
        ValueError: if u is divisible by p.
    """
    if u % p == 0:
        raise ValueError("non-unit has no Teichmüller lift")
    q = p ** prec
    x = u % q
    for _ in range(prec + 1):
        y = pow(x, p, q)
        if y == x:
            return PadicInt(p, prec, x)
        x = y
    raise ArithmeticError(f"Teichmüller iteration for {u} did not stabilize mod {p}^{prec}")


@lru_cache(maxsize=None)
def teichmuller_table(p: int, prec: int) -> Tuple[int, ...]:
    """omega(a) mod p^prec for a = 0..p-1 (entry 0 is 0)."""
    return (0,) + tuple(teichmuller(a, p, prec).value for a in range(1, p))


@dataclass(frozen=True)
class TameCharacter:
    """The character eps = omega^j of Z_p^x, extended by eps(p) = 0."""

    p: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % (self.p - 1))

    def value(self, t: int, prec: int) -> int:
        """eps(t) as an integer residue mod p^prec."""
        a = t % self.p
        if a == 0:
            return 0
        return pow(teichmuller_table(self.p, prec)[a], self.j, self.p ** prec)

    def table(self, prec: int) -> Tuple[int, ...]:
        """eps(a) mod p^prec for a = 0..p-1."""
        return tuple(self.value(a, prec) for a in range(self.p))

    def twist(self, k: int) -> "TameCharacter":
        """eps * omega^{-(k-2)}."""
        return TameCharacter(self.p, self.j - (k - 2))

    def __mul__(self, other: "TameCharacter") -> "TameCharacter":
        return TameCharacter(self.p, self.j + other.j)


def character_eval(eps: TameCharacter, t: int, prec: int) -> PadicInt:
    """eps(t) mod p^prec; zero for t divisible by p."""
    return PadicInt(eps.p, prec, eps.value(t, prec))


@dataclass(frozen=True)
class ArithmeticPoint:
    """
    A tame arithmetic point kappa of weight k with character eps.

    Its restriction to Z_p^x is chi(t) = eps(t) t^(k-2).
    """

    k: int
    eps: TameCharacter

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"weight must be >= 2, got {self.k}")

    @classmethod
    def of(cls, k: int, p: int, j: int = 0) -> "ArithmeticPoint":
        return cls(k, TameCharacter(p, j))

    @property
    def p(self) -> int:
        return self.eps.p

    @property
    def n(self) -> int:
        return self.k - 2

    @property
    def component(self) -> int:
        """Exponent c = j + (k-2) mod (p-1) of the tame component of Lambda."""
        return (self.eps.j + self.n) % (self.p - 1)

    def chi(self, t: int, prec: int) -> int:
        """chi(t) = eps(t) t^n mod p^prec as an integer (0 on non-units)."""
        q = self.p ** prec
        return self.eps.value(t, prec) * pow(t % q, self.n, q) % q

    def generator_terms(self, prec: int) -> List[Tuple[int, int]]:
        """Coefficient/group-element pairs of [1+p] - chi(1+p)."""
        q = self.p ** prec
        return [(1, (1 + self.p) % q), ((-self.chi(1 + self.p, prec)) % q, 1)]

    def family_character(self, k: int) -> TameCharacter:
        """Character at weight k on the same tame component."""
        return TameCharacter(self.p, self.component - (k - 2))


def kappa_eval(kappa: ArithmeticPoint, t: int, prec: int) -> PadicInt:
    """chi(t) = eps(t) t^(k-2) mod p^prec for a unit t."""
    if t % kappa.p == 0:
        raise ValueError(f"kappa is evaluated on units only, got {t}")
    return PadicInt(kappa.p, prec, kappa.chi(t, prec))


def twist(eps: TameCharacter, k: int) -> TameCharacter:
    """Character eps * omega^{-(k-2)} carried by weight k along a family."""
    return eps.twist(k)


def poly_eval(coeffs: Sequence[int], x: int, q: int) -> int:
    """Evaluate sum c_i x^i mod q (coefficients from the constant term up)."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def poly_derivative(coeffs: Sequence[int]) -> List[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_root(coeffs: Sequence[int], x0: int, p: int, prec: int) -> PadicInt:
    """
    Lift a simple root of f mod p to a root mod p^prec by Newton iteration.

    Args:
        coeffs: integer coefficients of f from the constant term up.
        x0: root of f modulo p.

    Raises:
        ValueError: if x0 is not a root, or is a multiple root mod p.
    """
    if poly_eval(coeffs, x0, p) != 0:
        raise ValueError(f"{x0} is not a root mod {p}")
    deriv = poly_derivative(coeffs)
    if poly_eval(deriv, x0, p) == 0:
        raise ValueError("root is not simple mod p")
    q = p ** prec
    x = x0 % p
    precision = 1
    while precision < prec:
        precision = min(2 * precision, prec)
        qq = p ** precision
        fx = poly_eval(coeffs, x, qq)
        dfx = poly_eval(deriv, x, qq)
        x = (x - fx * pow(dfx, -1, qq)) % qq
    return PadicInt(p, prec, x % q)


def unit_roots(coeffs: Sequence[int], p: int, prec: int) -> Tuple[List[PadicInt], List[int]]:
    """
    Unit roots of f mod p.

    Returns:
        (lifted simple roots sorted by residue, residues of multiple roots)
    """
    deriv = poly_derivative(coeffs)
    simple, multiple = [], []
    for a in range(1, p):
        if poly_eval(coeffs, a, p) != 0:
            continue
        if poly_eval(deriv, a, p) != 0:
            simple.append(hensel_root(coeffs, a, p, prec))
        else:
            multiple.append(a)
    logger.debug(f"unit roots mod {p}: {len(simple)} simple, {len(multiple)} multiple")
    return simple, multiple
