"""
Index of the primitive residue classes P_m of (Z/p^m)^2.

Every truncated measure, every p-level point set and every pushforward map
shares this index, so it is built once per (p, m) and cached.
"""

import logging
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class PrimitiveClasses:
    """
    Classes (x, y) mod p^m with p not dividing both coordinates.

    Canonical representatives are the integers in [0, p^m), listed in
    lexicographic order; `table[x, y]` is the index of a class or -1 for a
    non-primitive pair.
    """

    def __init__(self, p: int, m: int):
        if m < 0:
            raise ValueError(f"level must be >= 0, got {m}")
        self.p = p
        self.m = m
        self.N = p ** m
        grid_x, grid_y = np.meshgrid(np.arange(self.N, dtype=np.int64), np.arange(self.N, dtype=np.int64), indexing="ij")
        if m == 0:
            primitive = np.ones_like(grid_x, dtype=bool)
        else:
            primitive = (grid_x % p != 0) | (grid_y % p != 0)
        self.xs = grid_x[primitive]
        self.ys = grid_y[primitive]
        self.table = np.full((self.N, self.N), -1, dtype=np.int64)
        self.table[self.xs, self.ys] = np.arange(self.xs.size, dtype=np.int64)
        for arr in (self.xs, self.ys, self.table):
            arr.flags.writeable = False
        logger.debug(f"Indexed {self.xs.size} primitive classes mod {p}^{m}")

    @property
    def size(self) -> int:
        return int(self.xs.size)

    def __len__(self):
        return self.size

    def index(self, x: int, y: int) -> int:
        i = int(self.table[x % self.N, y % self.N])
        if i < 0:
            raise KeyError(f"({x}, {y}) is not primitive mod {self.p}^{self.m}")
        return i

    def rep(self, i: int) -> Tuple[int, int]:
        return int(self.xs[i]), int(self.ys[i])

    def image(self, g: Sequence[int]) -> np.ndarray:
        """Index of g.v for every class v (column action), -1 where g.v is not primitive."""
        a, b, c, d = (int(e) % self.N for e in g)
        X = (a * self.xs + b * self.ys) % self.N
        Y = (c * self.xs + d * self.ys) % self.N
        return self.table[X, Y]

    def coarsen_map(self, level: int) -> np.ndarray:
        """Index at the coarser level of every class at this level."""
        if level > self.m:
            raise ValueError(f"cannot coarsen level {self.m} to level {level}")
        coarse = primitive_classes(self.p, level)
        return coarse.table[self.xs % coarse.N, self.ys % coarse.N]


@lru_cache(maxsize=None)
def primitive_classes(p: int, m: int) -> PrimitiveClasses:
    return PrimitiveClasses(p, m)
