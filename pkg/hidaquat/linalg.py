"""
Dense linear algebra over Z/p^M.

Matrices are numpy arrays of residues in [0, q), q = p^M. int64 is used
whenever a matrix product cannot overflow, object dtype (Python integers)
otherwise. Elimination only ever pivots on units, so every routine stays
inside the local ring Z/p^M.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import VerificationError

logger = logging.getLogger(__name__)


def dtype_for(q: int, n: int):
    """Smallest safe dtype for products of n-dimensional matrices mod q."""
    return np.int64 if (q - 1) ** 2 * max(n, 1) < 2 ** 62 else object


def as_matrix(A, q: int) -> np.ndarray:
    """Reduce an array-like of integers mod q into the working dtype."""
    A = np.array(A, dtype=object) % q
    dtype = dtype_for(q, max(A.shape) if A.ndim else 1)
    return A if dtype is object else A.astype(np.int64)


def identity(n: int, q: int = 2) -> np.ndarray:
    return np.eye(n, dtype=dtype_for(q, n))


def mat_mul(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    inner = A.shape[-1]
    if dtype_for(q, inner) is object and (A.dtype != object or B.dtype != object):
        A = A.astype(object)
        B = B.astype(object)
    return np.mod(A.dot(B), q)


def mat_pow(A: np.ndarray, e: int, q: int) -> np.ndarray:
    result = identity(A.shape[0], q).astype(A.dtype)
    base = A
    while e:
        if e & 1:
            result = mat_mul(result, base, q)
        e >>= 1
        if e:
            base = mat_mul(base, base, q)
    return result


def _prec(p: int, q: int) -> int:
    M = 0
    while q > 1:
        q //= p
        M += 1
    return M


def unit_pivot_basis(A: np.ndarray, p: int, q: int) -> Tuple[np.ndarray, List[int]]:
    """
    Basis of the column span of A when that span is a free direct summand.

    Returns:
        (basis, pivots): an n x d matrix whose columns span the same module,
        and the row indices at which basis[pivots, :] is unit triangular.

    Raises:
        VerificationError: if elimination leaves a nonzero non-unit block.
    """
    W = np.array(A, dtype=A.dtype, copy=True) % q
    if W.dtype != object and (q - 1) ** 2 >= 2 ** 62:
        W = W.astype(object)
    n, k = W.shape
    active = np.ones(k, dtype=bool)
    columns, pivots = [], []
    while True:
        cols = np.flatnonzero(active)
        if cols.size == 0:
            break
        units = (W[:, cols] % p) != 0
        hit = np.flatnonzero(units.T.reshape(-1))
        if hit.size == 0:
            break
        col = cols[hit[0] // n]
        row = int(hit[0] % n)
        pivot = W[:, col].copy()
        inv = pow(int(pivot[row]), -1, q)
        active[col] = False
        rest = np.flatnonzero(active)
        if rest.size:
            factors = (W[row, rest] * inv) % q
            W[:, rest] = (W[:, rest] - np.outer(pivot, factors)) % q
        columns.append(pivot)
        pivots.append(row)
    rest = np.flatnonzero(active)
    if rest.size and np.any(W[:, rest] % q):
        raise VerificationError("column span is not a free summand")
    if not columns:
        return np.zeros((n, 0), dtype=A.dtype), []
    return np.stack(columns, axis=1), pivots


def inverse(A: np.ndarray, p: int, q: int) -> np.ndarray:
    """
    Inverse of a square matrix over Z/q by Gauss-Jordan with unit pivots.

    Raises:
        ValueError: if A is not invertible mod p.
    """
    n = A.shape[0]
    W = np.concatenate([A % q, identity(n, q).astype(A.dtype)], axis=1)
    if W.dtype != object and (q - 1) ** 2 >= 2 ** 62:
        W = W.astype(object)
    for c in range(n):
        candidates = np.flatnonzero(W[c:, c] % p) + c
        if candidates.size == 0:
            raise ValueError(f"matrix is not invertible mod {p}")
        r = candidates[0]
        if r != c:
            W[[c, r]] = W[[r, c]]
        W[c] = (W[c] * pow(int(W[c, c]), -1, q)) % q
        factors = W[:, c].copy()
        factors[c] = 0
        W = (W - np.outer(factors, W[c])) % q
    return W[:, n:]


def left_inverse(basis: np.ndarray, pivots: Sequence[int], p: int, q: int) -> np.ndarray:
    """R with R @ basis = Id, supported on the pivot rows."""
    n, d = basis.shape
    R = np.zeros((d, n), dtype=basis.dtype)
    if d:
        R[:, list(pivots)] = inverse(basis[list(pivots), :], p, q)
    return R


def restrict(T: np.ndarray, basis: np.ndarray, R: np.ndarray, q: int) -> np.ndarray:
    """Matrix of T on the span of basis, in basis coordinates."""
    return mat_mul(R, mat_mul(T, basis, q), q)


def coordinates(v: np.ndarray, R: np.ndarray, q: int) -> np.ndarray:
    return mat_mul(R, v, q)


def is_zero(A: np.ndarray, q: int) -> bool:
    return not np.any(np.asarray(A) % q)


def fitting_decomposition(T: np.ndarray, p: int, q: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Fitting decomposition of a finite Z/q-module under T.

    The ordinary part is the image of T^N for N >= M * n, on which T acts
    invertibly; the nilpotent part is the kernel of the projector.

    Returns:
        (E, ord_basis, nil_basis) where E is the idempotent onto the ordinary
        part along the nilpotent part.
    """
    n = T.shape[0]
    M = _prec(p, q)
    P = T % q
    steps = 1
    while steps < M * n:
        P = mat_mul(P, P, q)
        steps *= 2
    basis, pivots = unit_pivot_basis(P, p, q)
    if basis.shape[1] == 0:
        E = np.zeros_like(P)
    else:
        R = left_inverse(basis, pivots, p, q)
        RP = mat_mul(R, P, q)
        Q = mat_mul(RP, basis, q)
        E = mat_mul(basis, mat_mul(inverse(Q, p, q), RP, q), q)
    nil_basis, _ = unit_pivot_basis((identity(n, q).astype(E.dtype) - E) % q, p, q)
    logger.debug(f"Fitting decomposition mod {q}: ordinary rank {basis.shape[1]}, nilpotent rank {nil_basis.shape[1]}")
    return E, basis, nil_basis


def charpoly(A: np.ndarray, q: int) -> List[int]:
    """
    Characteristic polynomial of A mod q, coefficients from the constant term up.

    Division-free (Berkowitz) over ZZ, then reduced.
    """
    d = A.shape[0]
    if d == 0:
        return [1]
    rows = [[ZZ(int(x)) for x in row] for row in A]
    coeffs = DomainMatrix(rows, (d, d), ZZ).charpoly()
    return [int(c) % q for c in reversed(coeffs)]


def summand(E: np.ndarray, p: int, q: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Image of an idempotent as a free summand.

    Returns:
        (basis, coords) with coords @ basis = Id and basis @ coords = E.
    """
    basis, pivots = unit_pivot_basis(E, p, q)
    if basis.shape[1] == 0:
        return basis, np.zeros((0, E.shape[0]), dtype=E.dtype)
    return basis, mat_mul(left_inverse(basis, pivots, p, q), E, q)
