"""
Truncated p-adic measures on the primitive vectors X of Z_p^2.

A measure of level m and precision M is stored as the vector of its values on
the balls indexed by P_m, reduced mod p^M. Matrices act by pushforward on
column vectors and the Iwasawa algebra acts through scalar matrices.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from ..errors import PrecisionError
from ..linalg import dtype_for
from ..padic import ArithmeticPoint, PadicInt
from ..padic.mat2 import det
from .classes import PrimitiveClasses, primitive_classes

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruncatedMeasure:
    """Values of a measure on the balls of P_m, mod p^prec."""

    p: int
    m: int
    prec: int
    values: np.ndarray
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"measure level must be >= 1, got {self.m}")
        size = primitive_classes(self.p, self.m).size
        values = np.asarray(self.values)
        if values.shape != (size,):
            raise ValueError(f"expected {size} values at level {self.m}, got shape {values.shape}")
        if values.dtype == object:
            values = values % self.modulus
        values = values.astype(dtype_for(self.modulus, size)) % self.modulus
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    @property
    def classes(self) -> PrimitiveClasses:
        return primitive_classes(self.p, self.m)

    def __getitem__(self, v: Tuple[int, int]) -> int:
        return int(self.values[self.classes.index(*v)])

    def _check(self, other: "TruncatedMeasure"):
        if (self.p, self.m) != (other.p, other.m):
            raise ValueError(f"incompatible measures: level {self.p}^{self.m} vs {other.p}^{other.m}")

    def _new(self, values, prec: Optional[int] = None) -> "TruncatedMeasure":
        return TruncatedMeasure(self.p, self.m, self.prec if prec is None else prec, values)

    def __add__(self, other: "TruncatedMeasure") -> "TruncatedMeasure":
        self._check(other)
        return self._new(self.values + other.values, min(self.prec, other.prec))

    def __sub__(self, other: "TruncatedMeasure") -> "TruncatedMeasure":
        self._check(other)
        return self._new(self.values - other.values, min(self.prec, other.prec))

    def __neg__(self) -> "TruncatedMeasure":
        return self._new(-self.values)

    def scale(self, c: Union[int, PadicInt]) -> "TruncatedMeasure":
        return self._new(self.values * (int(c) % self.modulus))

    def __eq__(self, other):
        if not isinstance(other, TruncatedMeasure):
            return NotImplemented
        if (self.p, self.m) != (other.p, other.m):
            return False
        q = self.p ** min(self.prec, other.prec)
        return not np.any((self.values - other.values) % q)

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def total_mass(self) -> PadicInt:
        return PadicInt(self.p, self.prec, int(np.sum(self.values.astype(object))))

    def items(self) -> List[Tuple[int, int, int]]:
        """Nonzero (x, y, value) triples in lexicographic order."""
        nz = np.flatnonzero(self.values)
        return [(int(self.classes.xs[i]), int(self.classes.ys[i]), int(self.values[i])) for i in nz]

    def reduce(self, prec: int) -> "TruncatedMeasure":
        return self._new(self.values, min(prec, self.prec))


def zero_measure(p: int, m: int, prec: int) -> TruncatedMeasure:
    return TruncatedMeasure(p, m, prec, np.zeros(primitive_classes(p, m).size, dtype=np.int64))


def dirac(p: int, m: int, prec: int, v: Tuple[int, int]) -> TruncatedMeasure:
    classes = primitive_classes(p, m)
    values = np.zeros(classes.size, dtype=np.int64)
    values[classes.index(*v)] = 1
    return TruncatedMeasure(p, m, prec, values)


def uniform(p: int, m: int, prec: int) -> TruncatedMeasure:
    """Mass 1 on every class of P_m."""
    return TruncatedMeasure(p, m, prec, np.ones(primitive_classes(p, m).size, dtype=np.int64))


def random_measure(p: int, m: int, prec: int, rng: np.random.Generator) -> TruncatedMeasure:
    size = primitive_classes(p, m).size
    return TruncatedMeasure(p, m, prec, rng.integers(0, p ** prec, size=size, dtype=np.int64))


def integrate(nu: TruncatedMeasure, phi: Union[Mapping[Tuple[int, int], int], Callable[[int, int], int]], level: int) -> PadicInt:
    """
    Integral of a step function of the given level against nu.

    Args:
        phi: values on P_level, as a mapping from residue pairs (missing keys
            are 0) or as a callable on canonical representatives.
        level: level m' <= nu.m of phi.

    Raises:
        PrecisionError: if the step function is finer than the measure.
    """
    if level > nu.m:
        raise PrecisionError("insufficient measure level")
    coarse = primitive_classes(nu.p, level)
    q = nu.modulus
    if callable(phi):
        weights = [int(phi(*coarse.rep(i))) % q for i in range(coarse.size)]
    else:
        weights = [0] * coarse.size
        for (x, y), value in phi.items():
            weights[coarse.index(x, y)] = int(value) % q
    lookup = np.array(weights, dtype=object)[nu.classes.coarsen_map(level)]
    return PadicInt(nu.p, nu.prec, int(np.dot(lookup, nu.values.astype(object))))


def matrix_pushforward(g: Sequence[int], nu: TruncatedMeasure) -> TruncatedMeasure:
    """
    g.nu on column vectors: (g.nu)[w] = sum of nu[v] over g.v = w.

    Mass carried to non-primitive classes is discarded and reported in the
    `dropped` field of the result.

    Raises:
        ValueError: if g is singular or vanishes mod p.
    """
    g = tuple(int(e) for e in g)
    if det(g) == 0:
        raise ValueError(f"pushforward by the singular matrix {g}")
    if all(e % nu.p == 0 for e in g):
        raise ValueError(f"pushforward by {g} is ill-defined on primitive classes")
    image = nu.classes.image(g)
    keep = image >= 0
    out = np.zeros_like(nu.values)
    np.add.at(out, image[keep], nu.values[keep])
    dropped = int(np.sum(nu.values[~keep].astype(object))) % nu.modulus
    if dropped:
        logger.debug(f"pushforward by {g} dropped mass {dropped} mod {nu.p}^{nu.prec}")
    return TruncatedMeasure(nu.p, nu.m, nu.prec, out, dropped)


def scalar_act(t: int, nu: TruncatedMeasure) -> TruncatedMeasure:
    """Action of the group-like element [t] of Lambda, a unit t."""
    if t % nu.p == 0:
        raise ValueError(f"scalar action needs a unit, got {t}")
    return matrix_pushforward((t, 0, 0, t), nu)


@dataclass(frozen=True)
class LambdaElement:
    """A finite sum of c [t] in Z/p^M[(Z/p^M)^x]."""

    p: int
    prec: int
    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        q = self.p ** self.prec
        combined: Dict[int, int] = {}
        for c, t in self.terms:
            if t % self.p == 0:
                raise ValueError(f"group-like elements must be units, got {t}")
            combined[t % q] = (combined.get(t % q, 0) + c) % q
        object.__setattr__(self, "terms", tuple((c, t) for t, c in sorted(combined.items()) if c))

    @classmethod
    def group_like(cls, p: int, prec: int, t: int) -> "LambdaElement":
        return cls(p, prec, ((1, t),))

    @classmethod
    def pkappa_generator(cls, kappa: ArithmeticPoint, prec: int) -> "LambdaElement":
        """[1+p] - chi(1+p), a generator of the prime P_kappa."""
        return cls(kappa.p, prec, tuple(kappa.generator_terms(prec)))

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        return LambdaElement(self.p, min(self.prec, other.prec), self.terms + other.terms)

    def __mul__(self, other: Union["LambdaElement", int]) -> "LambdaElement":
        if isinstance(other, int):
            return LambdaElement(self.p, self.prec, tuple((c * other, t) for c, t in self.terms))
        q = self.p ** min(self.prec, other.prec)
        terms = tuple((c1 * c2, t1 * t2 % q) for c1, t1 in self.terms for c2, t2 in other.terms)
        return LambdaElement(self.p, min(self.prec, other.prec), terms)

    __rmul__ = __mul__


def lambda_act(lam: LambdaElement, nu: TruncatedMeasure) -> TruncatedMeasure:
    out = zero_measure(nu.p, nu.m, nu.prec)
    for c, t in lam.terms:
        out = out + scalar_act(t, nu).scale(c)
    return out


def pkappa_mult(nu: TruncatedMeasure, kappa: ArithmeticPoint) -> TruncatedMeasure:
    """([1+p] - chi(1+p)) nu, an element of P_kappa D."""
    return lambda_act(LambdaElement.pkappa_generator(kappa, nu.prec), nu)


def coarsen(nu: TruncatedMeasure, level: int) -> TruncatedMeasure:
    """Image of nu at a coarser level (sum over sub-classes)."""
    if level < 1 or level > nu.m:
        raise ValueError(f"cannot coarsen level {nu.m} to level {level}")
    target = primitive_classes(nu.p, level)
    out = np.zeros(target.size, dtype=nu.values.dtype)
    np.add.at(out, nu.classes.coarsen_map(level), nu.values)
    return TruncatedMeasure(nu.p, level, nu.prec, out)


def write_measure(nu: TruncatedMeasure, stream: TextIO):
    """Header `p m M`, then `x y value` for the nonzero classes, sorted."""
    stream.write(f"{nu.p} {nu.m} {nu.prec}\n")
    for x, y, value in nu.items():
        stream.write(f"{x} {y} {value}\n")


def read_measure(lines: Iterable[str]) -> TruncatedMeasure:
    it = (line.strip() for line in lines)
    it = (line for line in it if line and not line.startswith("#"))
    try:
        p, m, prec = (int(s) for s in next(it).split())
    except (StopIteration, ValueError) as e:
        raise ValueError(f"malformed measure header: {e}")
    classes = primitive_classes(p, m)
    values = np.zeros(classes.size, dtype=object)
    for line in it:
        x, y, value = (int(s) for s in line.split())
        values[classes.index(x, y)] = value
    return TruncatedMeasure(p, m, prec, values)
