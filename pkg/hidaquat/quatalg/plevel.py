"""
The finite set X(U_r) of p-level points.

For r >= 1 a point is a Gamma_i-orbit on the primitive classes P_r, which
index GL_2(Z/p^r)/K_r through the first column. For r = 0 the points are the
classes themselves, with the whole unit group as stabilizer.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..measures.classes import primitive_classes
from ..padic.mat2 import IDENTITY, Mat2, canonical_lift, inverse, mul
from .classset import ClassSetDatum
from .splitting import SplittingData

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PLevelPoint:
    index: int
    cls: int
    # canonical representative of the orbit in P_r (integers in [0, p^r))
    rep: Tuple[int, int]
    lift: Mat2
    # elements k = lift^-1 i_p(gamma) lift for gamma fixing the representative
    stabilizer: Tuple[Mat2, ...]
    orbit_size: int


class PLevelClassSet:
    """Points of X(U_r) with the data needed to evaluate forms at any u in GL_2(Z_p)."""

    def __init__(self, classes: ClassSetDatum, splitting: SplittingData, r: int):
        if r < 0:
            raise ValueError(f"level must be >= 0, got {r}")
        if r >= splitting.prec:
            raise ValueError(f"splitting precision {splitting.prec} is too small for level {r}")
        self.classes = classes
        self.splitting = splitting
        self.r = r
        self.p = splitting.p
        self.q = splitting.modulus
        # identity first, so representatives are located by the identity
        self.unit_images: List[List[Mat2]] = [
            [splitting.image(u) for u in sorted(c.units, key=lambda u: u != (1, 0, 0, 0))] for c in classes
        ]
        self.primitive = primitive_classes(self.p, r)
        self.points: List[PLevelPoint] = []
        self._labels: List[np.ndarray] = []
        self._elements: List[np.ndarray] = []
        for c in classes:
            self._add_class(c.index)
        logger.info(f"X(U_{r}) at p={self.p}: {len(self.points)} points over {len(classes)} classes")

    def _add_class(self, i: int):
        images = np.stack([self.primitive.image(g) for g in self.unit_images[i]])
        size = self.primitive.size
        labels = np.full(size, -1, dtype=np.int64)
        elements = np.full(size, -1, dtype=np.int64)
        for v in range(size):
            if labels[v] >= 0:
                continue
            index = len(self.points)
            orbit = images[:, v]
            fixing = []
            for g_index, w in enumerate(orbit):
                if labels[w] < 0:
                    labels[w] = index
                    elements[w] = g_index
                if w == v:
                    fixing.append(g_index)
            x, y = self.primitive.rep(v)
            lift = IDENTITY if self.r == 0 else canonical_lift(x, y, self.p, self.q)
            lift_inv = inverse(lift, self.q)
            stabilizer = tuple(mul(lift_inv, mul(self.unit_images[i][g], lift, self.q), self.q) for g in fixing)
            orbit_size = int(np.unique(orbit).size)
            self.points.append(PLevelPoint(index, i, (x, y), lift, stabilizer, orbit_size))
        self._labels.append(labels)
        self._elements.append(elements)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, t: int) -> PLevelPoint:
        return self.points[t]

    def labels(self, i: int) -> np.ndarray:
        """Point index of every class of P_r for ideal class i."""
        return self._labels[i]

    def locate_vector(self, i: int, v: Tuple[int, int]) -> Tuple[PLevelPoint, Mat2]:
        """The point of class i whose orbit contains v, and i_p(gamma) with gamma.rep = v."""
        idx = self.primitive.index(*v)
        point = self.points[int(self._labels[i][idx])]
        return point, self.unit_images[i][int(self._elements[i][idx])]

    def locate(self, i: int, u: Mat2) -> Tuple[PLevelPoint, Mat2]:
        """Locate the point of g_i u for u in GL_2(Z_p), through its first column."""
        N = self.primitive.N
        return self.locate_vector(i, (u[0] % N, u[2] % N))

    def orbit_sum(self) -> int:
        return sum(pt.orbit_size for pt in self.points)

    def expected_orbit_sum(self) -> int:
        return len(self.classes) * self.primitive.size


def p_level_classes(classes: ClassSetDatum, splitting: SplittingData, r: int) -> PLevelClassSet:
    return PLevelClassSet(classes, splitting, r)
