"""
Classical weight-k quaternionic forms at level U_r.

A form is stored by its values F(t) = f_i(c_t) at the points t of X(U_r),
one DualVec of degree k - 2 per point, where c_t is the canonical lift of
the point's representative. Values anywhere else follow from
f_i(i_p(gamma) c k) = k^-1 f_i(c) for gamma in Gamma_i and k in K_r.

Every operator is returned as Avg . raw . Avg with Avg the stabilizer
average, so operator identities hold exactly on the whole coordinate module.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..errors import PrecisionError
from ..linalg import dtype_for, mat_mul
from ..padic import DualVec, TameCharacter, dual_act, dual_matrix, teichmuller_table, valuation
from ..padic.mat2 import Mat2, inverse, mul, reduce
from ..quatalg import ClassSetDatum, SplittingData, coset_type, hecke_elements, p_level_classes
from .operators import OperatorMatrix

logger = logging.getLogger(__name__)

Block = Tuple[int, int, np.ndarray]


class WeightKSpace:
    """The coordinate module of S_k(U_r, Z/p^M) before any character is imposed."""

    def __init__(self, classes: ClassSetDatum, splitting: SplittingData, k: int, r: int, prec: int, workers: int = 1):
        if k < 2:
            raise ValueError(f"weight must be >= 2, got {k}")
        if splitting.prec < prec + r + 1:
            raise PrecisionError(f"splitting precision {splitting.prec} < {prec + r + 1} needed for level {r}, precision {prec}")
        self.classes = classes
        self.splitting = splitting
        self.k = k
        self.n = k - 2
        self.r = r
        self.p = splitting.p
        self.prec = prec
        self.q = self.p ** prec
        self.workers = workers
        self.points = p_level_classes(classes, splitting, r)
        self.block = k - 1
        self.dim = len(self.points) * self.block
        self._brandt: Dict[int, dict] = {}
        self._cache: Dict[Tuple, OperatorMatrix] = {}
        logger.info(f"Weight {k} space at level {r}, p={self.p}, prec {prec}: {len(self.points)} points, dimension {self.dim}")

    def __repr__(self):
        return f"WeightKSpace(D={self.classes.D}, M={self.classes.M}, p={self.p}, k={self.k}, r={self.r}, prec={self.prec})"

    @property
    def N(self) -> int:
        """Modulus of the splitting."""
        return self.splitting.modulus

    def brandt(self, n: int) -> dict:
        if n not in self._brandt:
            self._brandt[n] = hecke_elements(self.classes, n, self.splitting, self.workers)
        return self._brandt[n]

    def _dual(self, g: Mat2) -> np.ndarray:
        return dual_matrix(reduce(g, self.q), self.n, self.q)

    def _assemble(self, contributions: Callable[[int], List[Block]]) -> OperatorMatrix:
        """Sum the blocks produced for every point; parallel over points."""
        ts = range(len(self.points))
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(contributions, ts))
        else:
            results = [contributions(t) for t in ts]
        b = self.block
        A = np.zeros((self.dim, self.dim), dtype=dtype_for(self.q, self.dim * len(self.points)))
        for blocks in results:
            for t, t2, D in blocks:
                A[t * b:(t + 1) * b, t2 * b:(t2 + 1) * b] += np.asarray(D).astype(A.dtype)
            A %= self.q
        return OperatorMatrix(self.p, self.prec, A, b)

    def _located(self, j: int, u: Mat2, kinv_left: Mat2, q: int) -> Block:
        """Block for f_j(u), with kinv_left = u^-1 known to the caller."""
        point, g = self.points.locate(j, u)
        kinv = mul(kinv_left, mul(g, point.lift, q), q)
        return point.index, self._dual(kinv)

    def averaging(self) -> OperatorMatrix:
        """Projection onto stabilizer-invariant values, (1/|S_t|) sum of k over S_t."""
        if "avg" not in self._cache:
            def contributions(t):
                point = self.points[t]
                total = sum(self._dual(s).astype(object) for s in point.stabilizer)
                inv = pow(len(point.stabilizer), -1, self.q)
                return [(t, t, (total * inv) % self.q)]

            self._cache["avg"] = self._assemble(contributions)
        return self._cache["avg"]

    def _sandwich(self, raw: OperatorMatrix) -> OperatorMatrix:
        avg = self.averaging()
        return avg @ raw @ avg

    def _raw_brandt(self, n: int) -> OperatorMatrix:
        elements = self.brandt(n)
        h = len(self.classes)
        N = self.N

        def contributions(t):
            point = self.points[t]
            blocks = []
            if self.r == 0:
                for j in range(h):
                    for el in elements[(point.cls, j)]:
                        blocks.append((t, j, self._dual(el.image)))
                return blocks
            lift_inv = inverse(point.lift, N)
            for j in range(h):
                for el in elements[(point.cls, j)]:
                    x = mul(lift_inv, el.image, N)
                    t2, D = self._located(j, inverse(x, N), x, N)
                    blocks.append((t, t2, D))
            return blocks

        return self._assemble(contributions)

    def _raw_up(self) -> OperatorMatrix:
        """U_p through the cosets beta_t = [[1, 0], [p^r t, p]] of K_r diag(1, p) K_r."""
        elements = self.brandt(self.p)
        h = len(self.classes)
        p, r, N = self.p, self.r, self.N
        q1 = N // p

        def contributions(t):
            point = self.points[t]
            lift_inv = inverse(point.lift, N)
            candidates = [(j, mul(lift_inv, el.image, N)) for j in range(h) for el in elements[(point.cls, j)]]
            selected = [(j, x) for j, x in candidates if coset_type(x, p) is None]
            if len(selected) != 1:
                raise ValueError(f"expected one Brandt element in the coset diag(1, p) at point {t}, found {len(selected)}")
            j, x = selected[0]
            blocks = []
            for s in range(p):
                shift = p ** r * s
                uinv = (x[0] % q1, x[1] % q1, ((x[2] - shift * x[0]) // p) % q1, ((x[3] - shift * x[1]) // p) % q1)
                t2, D = self._located(j, inverse(uinv, q1), uinv, q1)
                beta = (1, 0, shift, p)
                blocks.append((t, t2, mat_mul(self._dual(beta), D, self.q)))
            return blocks

        return self._assemble(contributions)

    def hecke(self, n: int) -> OperatorMatrix:
        """
        T_n, with U_p in place of T_p at level r >= 1.

        Raises:
            ValueError: if n is not coprime to D M.
        """
        if n < 1 or gcd(n, self.classes.D * self.classes.M) != 1:
            raise ValueError(f"n={n} must be a positive integer coprime to DM={self.classes.D * self.classes.M}")
        key = ("T", n)
        if key not in self._cache:
            if self.r >= 1 and n % self.p == 0:
                e = valuation(n, self.p)
                rest = n // self.p ** e
                T = self.up() ** e @ self.hecke(rest)
            else:
                T = self._sandwich(self._raw_brandt(n))
            self._cache[key] = T
            logger.debug(f"T_{n} assembled on {self!r}")
        return self._cache[key]

    def up(self) -> OperatorMatrix:
        """U_p at level r >= 1, T_p at level 0."""
        if self.r == 0:
            return self.hecke(self.p)
        if ("U",) not in self._cache:
            self._cache[("U",)] = self._sandwich(self._raw_up())
        return self._cache[("U",)]

    def diamond_unit(self, a: int) -> OperatorMatrix:
        """<a> f_i(c) = f_i(a^-1 c) for a p-adic unit a, given mod p^N."""
        if a % self.p == 0:
            raise ValueError(f"diamond operators need a unit, got {a}")
        key = ("<>", a % self.N)
        if key not in self._cache:
            N = self.N
            scalar = (a % N, 0, 0, a % N)
            scalar_inv = inverse(scalar, N)

            def contributions(t):
                point = self.points[t]
                u = mul(scalar_inv, point.lift, N)
                t2, D = self._located(point.cls, u, mul(scalar, inverse(point.lift, N), N), N)
                return [(t, t2, D)]

            self._cache[key] = self._sandwich(self._assemble(contributions))
        return self._cache[key]

    def diamond(self, n: int) -> OperatorMatrix:
        """
        T_{n,n} for an integer n coprime to M D p.

        Raises:
            ValueError: on a gcd violation.
        """
        if gcd(n, self.classes.D * self.classes.M * self.p) != 1:
            raise ValueError(f"n={n} must be coprime to MDp={self.classes.D * self.classes.M * self.p}")
        return self.diamond_unit(n)

    def character_projector(self, eps: TameCharacter) -> OperatorMatrix:
        """(1/(p-1)) sum over Teichmuller d of chi(d)^-1 <d>, chi(d) = eps(d) d^(k-2)."""
        key = ("chi", eps.j)
        if key not in self._cache:
            p, q = self.p, self.q
            omega_N = teichmuller_table(p, self.splitting.prec)
            omega = teichmuller_table(p, self.prec)
            total = OperatorMatrix(p, self.prec, np.zeros((self.dim, self.dim), dtype=np.int64), self.block)
            for a in range(1, p):
                chi = pow(omega[a], (eps.j + self.n) % (p - 1), q)
                total = total + self.diamond_unit(omega_N[a]).scale(pow(chi, -1, q))
            self._cache[key] = total.scale(pow(p - 1, -1, q))
        return self._cache[key]

    def zero(self) -> "WeightKForm":
        return WeightKForm(self, np.zeros(self.dim, dtype=np.int64))

    def random_form(self, rng: np.random.Generator) -> "WeightKForm":
        raw = rng.integers(0, self.q, size=self.dim, dtype=np.int64)
        return WeightKForm(self, self.averaging() @ raw)

    def form_from_values(self, values: List[DualVec]) -> "WeightKForm":
        if len(values) != len(self.points):
            raise ValueError(f"expected {len(self.points)} values, got {len(values)}")
        prec = min(v.prec for v in values) if values else self.prec
        return WeightKForm(self, np.concatenate([np.array(v.values, dtype=object) for v in values]), min(prec, self.prec))


@dataclass(frozen=True, eq=False)
class WeightKForm:
    """A weight-k form as a coordinate vector of its values at the points."""

    space: WeightKSpace
    coords: np.ndarray
    prec: Optional[int] = None
    _values: list = field(default_factory=list, init=False, compare=False, repr=False)

    def __post_init__(self):
        prec = self.space.prec if self.prec is None else min(self.prec, self.space.prec)
        object.__setattr__(self, "prec", prec)
        q = self.space.p ** prec
        coords = np.array(self.coords, dtype=object) % q
        if coords.shape != (self.space.dim,):
            raise ValueError(f"expected {self.space.dim} coordinates, got shape {coords.shape}")
        object.__setattr__(self, "coords", coords.astype(dtype_for(q, self.space.dim)))

    @property
    def modulus(self) -> int:
        return self.space.p ** self.prec

    @property
    def values(self) -> List[DualVec]:
        if not self._values:
            b = self.space.block
            self._values.extend(
                DualVec(self.space.p, self.prec, tuple(int(c) for c in self.coords[t * b:(t + 1) * b]))
                for t in range(len(self.space.points))
            )
        return self._values

    def evaluate(self, i: int, u: Mat2) -> DualVec:
        """f_i(u) for u in GL_2(Z_p), given mod the splitting modulus."""
        N = self.space.N
        point, g = self.space.points.locate(i, u)
        kinv = mul(inverse(u, N), mul(g, point.lift, N), N)
        return dual_act(kinv, self.values[point.index]).reduce(self.prec)

    def apply(self, T: OperatorMatrix) -> "WeightKForm":
        prec = min(self.prec, T.prec)
        return WeightKForm(self.space, mat_mul(T.matrix.astype(object), self.coords.astype(object), self.space.p ** prec), prec)

    def __add__(self, other: "WeightKForm") -> "WeightKForm":
        return WeightKForm(self.space, self.coords.astype(object) + other.coords, min(self.prec, other.prec))

    def __sub__(self, other: "WeightKForm") -> "WeightKForm":
        return WeightKForm(self.space, self.coords.astype(object) - other.coords, min(self.prec, other.prec))

    def scale(self, c: int) -> "WeightKForm":
        return WeightKForm(self.space, self.coords.astype(object) * int(c), self.prec)

    def __eq__(self, other):
        if not isinstance(other, WeightKForm):
            return NotImplemented
        q = self.space.p ** min(self.prec, other.prec)
        return self.space is other.space and not np.any((self.coords.astype(object) - other.coords) % q)

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def valuation(self) -> int:
        """Smallest valuation of a coordinate, the precision for the zero form."""
        nonzero = [int(c) for c in self.coords if int(c)]
        return min((valuation(c, self.space.p) for c in nonzero), default=self.prec)

    def is_invariant(self) -> bool:
        return self.apply(self.space.averaging()) == self


def hecke_on_weightk(n: int, space: WeightKSpace) -> OperatorMatrix:
    return space.hecke(n)


def diamond(n: int, space: WeightKSpace) -> OperatorMatrix:
    return space.diamond(n)


def character_projector(space: WeightKSpace, eps: TameCharacter) -> OperatorMatrix:
    return space.character_projector(eps)
