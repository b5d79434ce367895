"""
Measure-valued forms at level U_0.

A measure form assigns to every ideal class i a truncated measure a_i on the
primitive vectors, invariant under pushforward by i_p(Gamma_i). Its reduced
coordinates are the values of a_i at the Gamma_i-orbit representatives of
P_m, which are exactly the points of X(U_m). Hecke operators act by
(T_n s)_i = sum over Brandt elements (j, b) of i_p(b)_* a_j.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Sequence, TextIO, Tuple

import numpy as np

from ..errors import PrecisionError, VerificationError
from ..linalg import dtype_for, mat_mul
from ..measures import (
    TruncatedMeasure,
    matrix_pushforward,
    pkappa_mult,
    read_measure,
    scalar_act,
    write_measure,
    zero_measure,
)
from ..padic import ArithmeticPoint, teichmuller_table
from ..padic.mat2 import Mat2
from ..quatalg import ClassSetDatum, SplittingData, coset_quotient, coset_type, hecke_elements, p_level_classes
from .operators import OperatorMatrix

logger = logging.getLogger(__name__)

PushTerm = Tuple[int, int, Mat2, int]


class MeasureFormSpace:
    """Measure forms of level m and precision M over a class set."""

    def __init__(self, classes: ClassSetDatum, splitting: SplittingData, m: int, prec: int, workers: int = 1):
        if m < 1:
            raise ValueError(f"measure level must be >= 1, got {m}")
        if splitting.prec <= m:
            raise PrecisionError(f"splitting precision {splitting.prec} must exceed the measure level {m}")
        self.classes = classes
        self.splitting = splitting
        self.p = splitting.p
        self.m = m
        self.prec = prec
        self.q = self.p ** prec
        self.workers = workers
        self.points = p_level_classes(classes, splitting, m)
        self.primitive = self.points.primitive
        self.dim = len(self.points)
        self.rep_index = np.array([self.primitive.index(*pt.rep) for pt in self.points], dtype=np.int64)
        self.is_rep = [self.rep_index[self.points.labels(i)] == np.arange(self.primitive.size) for i in range(len(classes))]
        self._brandt: Dict[int, dict] = {}
        self._cache: Dict[Tuple, OperatorMatrix] = {}
        logger.info(f"Measure forms at level {m}, precision {prec}: {self.dim} orbit coordinates over {len(classes)} classes")

    def __repr__(self):
        return f"MeasureFormSpace(D={self.classes.D}, M={self.classes.M}, p={self.p}, m={self.m}, prec={self.prec})"

    def brandt(self, n: int) -> dict:
        if n not in self._brandt:
            self._brandt[n] = hecke_elements(self.classes, n, self.splitting, self.workers)
        return self._brandt[n]

    # coordinates

    def from_coords(self, coords: Sequence[int]) -> "MeasureForm":
        coords = np.array(coords, dtype=object) % self.q
        if coords.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got shape {coords.shape}")
        components = tuple(
            TruncatedMeasure(self.p, self.m, self.prec, coords[self.points.labels(i)]) for i in range(len(self.classes))
        )
        return MeasureForm(self, components)

    def to_coords(self, s: "MeasureForm") -> np.ndarray:
        out = np.zeros(self.dim, dtype=dtype_for(self.q, self.dim))
        for pt in self.points:
            out[pt.index] = s.components[pt.cls].values[self.rep_index[pt.index]]
        return out

    def zero(self) -> "MeasureForm":
        return MeasureForm(self, tuple(zero_measure(self.p, self.m, self.prec) for _ in self.classes))

    def random_form(self, rng: np.random.Generator) -> "MeasureForm":
        return self.from_coords(rng.integers(0, self.q, size=self.dim, dtype=np.int64))

    def average(self, i: int, nu: TruncatedMeasure) -> TruncatedMeasure:
        """(1/|Gamma_i|) sum of i_p(gamma)_* nu, the projection onto invariant measures."""
        images = self.points.unit_images[i]
        total = zero_measure(self.p, self.m, nu.prec)
        for g in images:
            total = total + matrix_pushforward(g, nu)
        return total.scale(pow(len(images), -1, nu.modulus))

    # operators

    def pushforward_operator(self, terms: Iterable[PushTerm]) -> OperatorMatrix:
        """Matrix of s -> (sum of c g_* a_j over the terms (i, j, g, c))_i on coordinates."""
        A = np.zeros((self.dim, self.dim), dtype=object)
        acc = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, j, g, c in terms:
            img = self.primitive.image(g)
            keep = img >= 0
            keep[keep] = self.is_rep[i][img[keep]]
            rows = self.points.labels(i)[img[keep]]
            cols = self.points.labels(j)[keep]
            if c == 1:
                np.add.at(acc, (rows, cols), 1)
            else:
                np.add.at(A, (rows, cols), c % self.q)
        return OperatorMatrix(self.p, self.prec, (A + acc) % self.q)

    def hecke(self, n: int) -> OperatorMatrix:
        """
        T_n for n coprime to D M; T_p is the sum over the p + 1 cosets of norm p.

        Raises:
            ValueError: on a gcd violation.
        """
        if n < 1 or gcd(n, self.classes.D * self.classes.M) != 1:
            raise ValueError(f"n={n} must be a positive integer coprime to DM={self.classes.D * self.classes.M}")
        key = ("T", n)
        if key not in self._cache:
            elements = self.brandt(n)
            terms = [(i, j, el.image, 1) for (i, j), els in sorted(elements.items()) for el in els]
            self._cache[key] = self.pushforward_operator(terms)
            logger.debug(f"T_{n} assembled on {self!r}")
        return self._cache[key]

    def diamond_unit(self, a: int) -> OperatorMatrix:
        """<a> = scalar action of the unit a on every component."""
        if a % self.p == 0:
            raise ValueError(f"diamond operators need a unit, got {a}")
        key = ("<>", a % self.primitive.N)
        if key not in self._cache:
            terms = [(i, i, (a, 0, 0, a), 1) for i in range(len(self.classes))]
            self._cache[key] = self.pushforward_operator(terms)
        return self._cache[key]

    def diamond(self, n: int) -> OperatorMatrix:
        if gcd(n, self.classes.D * self.classes.M * self.p) != 1:
            raise ValueError(f"n={n} must be coprime to MDp={self.classes.D * self.classes.M * self.p}")
        return self.diamond_unit(n)

    def tame_projector(self, c: int) -> OperatorMatrix:
        """(1/(p-1)) sum over Teichmuller d of omega(d)^-c <d>: the component c of Lambda."""
        key = ("tame", c % (self.p - 1))
        if key not in self._cache:
            p, q = self.p, self.q
            omega = teichmuller_table(p, max(self.prec, self.m))
            total = None
            for a in range(1, p):
                weight = pow(omega[a] % q, (-c) % (p - 1), q)
                term = self.diamond_unit(omega[a]).scale(weight)
                total = term if total is None else total + term
            self._cache[key] = total.scale(pow(p - 1, -1, q))
        return self._cache[key]


@dataclass(frozen=True, eq=False)
class MeasureForm:
    space: MeasureFormSpace
    components: Tuple[TruncatedMeasure, ...]

    def __post_init__(self):
        if len(self.components) != len(self.space.classes):
            raise ValueError(f"expected {len(self.space.classes)} components, got {len(self.components)}")

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.components)

    def coords(self) -> np.ndarray:
        return self.space.to_coords(self)

    def apply(self, T: OperatorMatrix) -> "MeasureForm":
        return self.space.from_coords(mat_mul(T.matrix.astype(object), self.coords().astype(object), self.space.q))

    def __add__(self, other: "MeasureForm") -> "MeasureForm":
        return MeasureForm(self.space, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "MeasureForm") -> "MeasureForm":
        return MeasureForm(self.space, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c: int) -> "MeasureForm":
        return MeasureForm(self.space, tuple(a.scale(c) for a in self.components))

    def __eq__(self, other):
        if not isinstance(other, MeasureForm):
            return NotImplemented
        return self.space is other.space and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)

    def is_invariant(self) -> bool:
        """Check a_i = i_p(gamma)_* a_i for every unit gamma of every class."""
        return all(
            matrix_pushforward(g, a) == a
            for a, images in zip(self.components, self.space.points.unit_images)
            for g in images
        )


def hecke_on_measureform(s: MeasureForm, n: int) -> MeasureForm:
    """
    Sum of i_p(b)_* a_j over the Brandt elements of norm n, averaged over Gamma_i.

    Level and precision are preserved.
    """
    space = s.space
    elements = space.brandt(n)
    components = []
    for i in range(len(space.classes)):
        total = zero_measure(space.p, space.m, s.prec)
        for j in range(len(space.classes)):
            for el in elements[(i, j)]:
                total = total + matrix_pushforward(el.image, s.components[j])
        components.append(space.average(i, total))
    return MeasureForm(space, tuple(components))


def tp_measure(s: MeasureForm) -> MeasureForm:
    """
    T_p through the explicit cosets alpha GL_2(Z_p) of determinant p.

    Each i_p(b) is written as alpha w with alpha = [[p, t], [0, 1]] or
    diag(1, p), and pushed forward as alpha_* w_*.

    Raises:
        VerificationError: if the Brandt elements of a class do not meet each
            of the p + 1 cosets exactly once.
    """
    space = s.space
    p, N = space.p, space.splitting.modulus
    elements = space.brandt(p)
    components = []
    for i in range(len(space.classes)):
        total = zero_measure(p, space.m, s.prec)
        seen = set()
        for j in range(len(space.classes)):
            for el in elements[(i, j)]:
                t = coset_type(el.image, p)
                seen.add(t)
                alpha = (1, 0, 0, p) if t is None else (p, t, 0, 1)
                w = coset_quotient(el.image, t, p, N)
                total = total + matrix_pushforward(alpha, matrix_pushforward(w, s.components[j]))
        if len(seen) != p + 1:
            raise VerificationError(f"class {i}: Brandt elements of norm {p} meet {len(seen)} of the {p + 1} cosets")
        components.append(total)
    return MeasureForm(space, tuple(components))


def tame_projector(s: MeasureForm, c: int) -> MeasureForm:
    """The component c of Lambda, computed on the measures directly."""
    space = s.space
    p = space.p
    omega = teichmuller_table(p, max(space.prec, space.m))
    inv = pow(p - 1, -1, space.q)
    components = []
    for nu in s.components:
        total = zero_measure(p, space.m, nu.prec)
        for a in range(1, p):
            total = total + scalar_act(omega[a], nu).scale(pow(omega[a], (-c) % (p - 1), space.q))
        components.append(total.scale(inv))
    return MeasureForm(space, tuple(components))


def pkappa_mult_form(s: MeasureForm, kappa: ArithmeticPoint) -> MeasureForm:
    """([1+p] - chi(1+p)) s, componentwise."""
    return MeasureForm(s.space, tuple(pkappa_mult(nu, kappa) for nu in s.components))


def write_measure_form(s: MeasureForm, stream: TextIO):
    """Header `mform D M h`, then one measure block per class."""
    space = s.space
    stream.write(f"mform {space.classes.D} {space.classes.M} {len(space.classes)}\n")
    for i, nu in enumerate(s.components):
        stream.write(f"class {i}\n")
        write_measure(nu, stream)


def read_measure_form(space: MeasureFormSpace, lines: Iterable[str]) -> MeasureForm:
    """
    Parse a measure-form file for the given space.

    Raises:
        ValueError: on malformed input or a mismatched space.
    """
    rows = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    try:
        tag, D, M, h = rows[0].split()
        if tag != "mform" or (int(D), int(M), int(h)) != (space.classes.D, space.classes.M, len(space.classes)):
            raise ValueError(f"header {rows[0]!r} does not match {space!r}")
        blocks: List[List[str]] = []
        for row in rows[1:]:
            if row.startswith("class"):
                blocks.append([])
            else:
                blocks[-1].append(row)
        components = tuple(read_measure(block) for block in blocks)
    except (IndexError, ValueError) as e:
        logger.error(f"Error parsing measure-form file: {e}")
        raise ValueError(f"malformed measure-form file: {e}")
    s = MeasureForm(space, components)
    if any((nu.p, nu.m) != (space.p, space.m) for nu in components):
        raise ValueError(f"measure-form file does not match level {space.m}")
    return s
