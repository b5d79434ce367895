"""
Tests for linear algebra over Z/p^M.
"""

import pytest
import numpy as np

from hidaquat.errors import VerificationError
from hidaquat.linalg import (
    charpoly,
    fitting_decomposition,
    identity,
    inverse,
    mat_mul,
    mat_pow,
    summand,
    unit_pivot_basis,
)

Q = 7 ** 3


def test_inverse_with_pivoting(rng):
    """A permuted unipotent-mod-p matrix is inverted exactly."""
    n = 6
    A = (np.eye(n, dtype=np.int64) + 7 * rng.integers(0, 49, size=(n, n))) % Q
    A = A[[3, 0, 5, 1, 4, 2]]
    Ainv = inverse(A, 7, Q)
    assert np.array_equal(mat_mul(Ainv, A, Q), identity(n, Q))
    assert np.array_equal(mat_mul(A, Ainv, Q), identity(n, Q))


def test_inverse_rejects_singular_matrix():
    """A matrix singular mod p has no inverse."""
    with pytest.raises(ValueError):
        inverse(np.array([[1, 2], [2, 4]], dtype=np.int64), 7, Q)


def test_unit_pivot_basis_rejects_non_free_span():
    """The span of (7) in Z/49 is not a free summand."""
    with pytest.raises(VerificationError, match="column span is not a free summand"):
        unit_pivot_basis(np.array([[7]], dtype=np.int64), 7, 49)


def test_mat_pow_matches_repeated_products(rng):
    """Square-and-multiply agrees with the naive product."""
    A = rng.integers(0, Q, size=(4, 4))
    naive = identity(4, Q)
    for _ in range(5):
        naive = mat_mul(naive, A, Q)
    assert np.array_equal(mat_pow(A, 5, Q), naive)


def test_fitting_decomposition_contract():
    """E is idempotent, commutes with T and splits off the invertible block."""
    T = np.array([[2, 1, 0], [0, 2, 0], [0, 0, 7]], dtype=np.int64)
    E, ord_basis, nil_basis = fitting_decomposition(T, 7, Q)
    assert np.array_equal(mat_mul(E, E, Q), E % Q)
    assert np.array_equal(mat_mul(E, T, Q), mat_mul(T, E, Q))
    assert ord_basis.shape[1] == 2
    assert nil_basis.shape[1] == 1
    assert np.array_equal(E % Q, np.diag([1, 1, 0]))
    nil = (identity(3, Q) - E) % Q
    assert not np.any(mat_mul(mat_pow(T, 3, Q), nil, Q))


def test_summand_coordinates():
    """coords @ basis = Id and basis @ coords = E."""
    T = np.array([[2, 1, 0], [0, 2, 0], [0, 0, 7]], dtype=np.int64)
    E, _, _ = fitting_decomposition(T, 7, Q)
    basis, coords = summand(E, 7, Q)
    assert np.array_equal(mat_mul(coords, basis, Q), identity(2, Q))
    assert np.array_equal(mat_mul(basis, coords, Q), E % Q)


def test_charpoly():
    """x^2 - 5x - 2 for [[1, 2], [3, 4]], constant term first."""
    A = np.array([[1, 2], [3, 4]], dtype=np.int64)
    assert charpoly(A, 49) == [47, 44, 1]
    assert charpoly(np.zeros((0, 0), dtype=np.int64), 49) == [1]
