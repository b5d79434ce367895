"""
Operator matrices on the coordinate modules of form spaces.

Coordinates are grouped in blocks, one block per point of the underlying
point set (block size k - 1 for weight-k forms, 1 for measure forms). The
matrix acts on column vectors of coordinates mod p^prec.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, TextIO, Union

import numpy as np

from ..linalg import as_matrix, identity, inverse, is_zero, mat_mul, mat_pow
from ..padic import PadicInt

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    p: int
    prec: int
    matrix: np.ndarray
    block: int = 1

    def __post_init__(self):
        A = as_matrix(self.matrix, self.modulus)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % self.block:
            raise ValueError(f"operator matrix of shape {A.shape} does not fit blocks of size {self.block}")
        A.flags.writeable = False
        object.__setattr__(self, "matrix", A)

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, p: int, prec: int, dim: int, block: int = 1) -> "OperatorMatrix":
        return cls(p, prec, identity(dim, p ** prec), block)

    def block_at(self, t: int, u: int) -> np.ndarray:
        """Block mapping the coordinates of point u into those of point t."""
        b = self.block
        return self.matrix[t * b:(t + 1) * b, u * b:(u + 1) * b]

    def _other(self, other: "OperatorMatrix") -> int:
        if other.dim != self.dim or other.p != self.p:
            raise ValueError(f"incompatible operators: {self.dim} vs {other.dim}")
        return min(self.prec, other.prec)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            prec = self._other(other)
            return OperatorMatrix(self.p, prec, mat_mul(self.matrix, other.matrix, self.p ** prec), self.block)
        return mat_mul(self.matrix, as_matrix(other, self.modulus), self.modulus)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        prec = self._other(other)
        return OperatorMatrix(self.p, prec, self.matrix.astype(object) + other.matrix, self.block)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        prec = self._other(other)
        return OperatorMatrix(self.p, prec, self.matrix.astype(object) - other.matrix, self.block)

    def scale(self, c: Union[int, PadicInt]) -> "OperatorMatrix":
        return OperatorMatrix(self.p, self.prec, self.matrix.astype(object) * int(c), self.block)

    def __pow__(self, e: int) -> "OperatorMatrix":
        if e < 0:
            return OperatorMatrix(self.p, self.prec, inverse(self.matrix, self.p, self.modulus), self.block) ** (-e)
        return OperatorMatrix(self.p, self.prec, mat_pow(self.matrix, e, self.modulus), self.block)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.dim != self.dim or other.p != self.p:
            return False
        return is_zero(self.matrix.astype(object) - other.matrix, self.p ** min(self.prec, other.prec))

    __hash__ = None

    def reduce(self, prec: int) -> "OperatorMatrix":
        return OperatorMatrix(self.p, min(prec, self.prec), self.matrix, self.block)

    def is_identity(self) -> bool:
        return self == OperatorMatrix.identity(self.p, self.prec, self.dim, self.block)

    def row_sums(self):
        return [int(s) % self.modulus for s in self.matrix.astype(object).sum(axis=1)]

    def signed(self):
        """Entries as integers in (-q/2, q/2]."""
        q = self.modulus
        A = self.matrix.astype(object)
        return np.where(A > q // 2, A - q, A)


def write_matrix(T: OperatorMatrix, stream: TextIO):
    """Header `p M dim block`, then one line of residues per row."""
    stream.write(f"{T.p} {T.prec} {T.dim} {T.block}\n")
    for row in T.matrix:
        stream.write(" ".join(str(int(v)) for v in row) + "\n")


def read_matrix(lines: Iterable[str]) -> OperatorMatrix:
    rows = [line.split() for line in lines if line.strip() and not line.startswith("#")]
    try:
        p, prec, dim, block = (int(s) for s in rows[0])
        matrix = np.array([[int(v) for v in row] for row in rows[1:]], dtype=object)
        if matrix.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {matrix.shape}")
    except (IndexError, ValueError) as e:
        logger.error(f"Error parsing matrix file: {e}")
        raise ValueError(f"malformed matrix file: {e}")
    return OperatorMatrix(p, prec, matrix, block)
