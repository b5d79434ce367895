"""
Tests for quaternion algebras, orders, class sets and Brandt elements.

The Brandt module of discriminant 11 is checked against point counts of the
elliptic curve of conductor 11.
"""

import io
from fractions import Fraction

import pytest
from sympy import primerange

from hidaquat.quatalg import (
    INFINITY,
    Lattice,
    brandt_matrix,
    build_algebra,
    class_set,
    coset_quotient,
    coset_type,
    eichler_mass,
    enumerate_norm,
    hecke_elements,
    hilbert_reciprocity,
    hilbert_symbol,
    hnf,
    lll_reduce,
    order_builder,
    p_level_classes,
    read_classset,
    reduced_discriminant,
    splitting_at_p,
    write_classset,
)
from hidaquat.padic.mat2 import det, mul


def _points_on_11a(ell):
    """#E(F_ell) for y^2 + y = x^3 - x^2 - 10x - 20, point at infinity included."""
    count = 1
    for x in range(ell):
        for y in range(ell):
            if (y * y + y - (x ** 3 - x * x - 10 * x - 20)) % ell == 0:
                count += 1
    return count


def _trace(matrix):
    return sum(matrix[i][i] for i in range(len(matrix)))


def test_build_algebra(algebra11):
    """D=11 gives (-1,-11), ramified at 11 and infinity."""
    assert (algebra11.a, algebra11.b) == (-1, -11)
    assert algebra11.ramified_places() == [11, INFINITY]
    assert algebra11.discriminant == 11
    assert algebra11.is_definite
    assert hilbert_symbol(-1, -11, 11) == -1
    assert hilbert_symbol(-1, -11, 2) == 1
    assert hilbert_reciprocity(algebra11)


def test_build_algebra_searches_beyond_table():
    """Discriminant 17 is found by search and satisfies reciprocity."""
    B = build_algebra(17)
    assert B.ramified_places() == [17, INFINITY]
    assert hilbert_reciprocity(B)


@pytest.mark.parametrize("D", [1, 6, 9])
def test_build_algebra_rejects_bad_discriminant(D):
    """Even prime counts and squares have no definite algebra."""
    with pytest.raises(ValueError):
        build_algebra(D)


def test_order_discriminants(algebra11):
    """The maximal order has reduced discriminant D; an Eichler order D*M."""
    R, O = order_builder(algebra11, 1)
    assert reduced_discriminant(algebra11, R.lattice) == 11
    assert O is R
    _, O3 = order_builder(build_algebra(2), 3)
    assert O3.discriminant == 6
    assert O3.level == 3


@pytest.mark.parametrize("D, M", [(3, 2), (3, 4), (5, 6), (7, 8)])
def test_eichler_orders_at_2(D, M):
    """Levels divisible by 2 give orders of discriminant D*M and index M cut out by the level functional."""
    R, O = order_builder(build_algebra(D), M)
    assert O.discriminant == D * M
    assert O.level == M
    assert R.lattice.contains_lattice(O.lattice)
    assert O.lattice.index_in(R.lattice) == M
    modulus, functional = O.orientation
    assert modulus == M
    for x in O.basis:
        coords = R.lattice.coordinates(x)
        assert sum(int(c) * f for c, f in zip(coords, functional)) % M == 0


def test_eichler_order_level_2_class_set():
    """The Eichler order of level 2 in discriminant 3 is alone in its class, with 4 units."""
    _, O = order_builder(build_algebra(3), 2)
    datum = class_set(O, 7)
    assert datum.mass == Fraction(1, 4)
    assert len(datum) == 1
    assert datum[0].unit_count == 4


def test_eichler_order_rejects_level_sharing_discriminant(algebra11):
    with pytest.raises(ValueError, match="must be prime to D=11"):
        order_builder(algebra11, 22)


def test_hnf_is_canonical():
    """Generating sets of one lattice share a basis; vector s ends at coordinate s."""
    assert hnf([[4, 2], [3, 3]]) == [[6, 0], [5, 1]]
    assert hnf([[3, 3], [1, -1], [4, 2]]) == hnf([[1, -1], [0, 6]])
    assert hnf([[0, 0], [2, 0], [1, 1]]) == [[2, 0], [1, 1]]
    assert all(type(x) is int for row in hnf([[4, 2], [3, 3]]) for x in row)


def test_lll_reduce_keeps_the_lattice(algebra11):
    """A badly skewed basis is reduced to short vectors of the same lattice."""
    R, _ = order_builder(algebra11, 1)
    U = [(1, 100, 0, 0), (0, 1, 57, 0), (0, 0, 1, 33), (0, 0, 0, 1)]
    skewed = [R.lattice.element(row) for row in U]
    reduced = lll_reduce(skewed, algebra11.bilinear)
    assert Lattice.from_generators(algebra11, reduced) == R.lattice
    assert all(algebra11.norm(b) <= 24 for b in reduced)
    assert max(algebra11.norm(b) for b in skewed) > 1000
    assert all(type(c.numerator) is int and type(c.denominator) is int for b in reduced for c in b)


def test_enumerate_norm_counts():
    """The Hurwitz order has 24 times the sum of the odd divisors of n elements of norm n."""
    R, _ = order_builder(build_algebra(2), 1)
    assert len(enumerate_norm(R.lattice, 1)) == 24
    assert len(enumerate_norm(R.lattice, 2)) == 24
    assert len(enumerate_norm(R.lattice, 3)) == 96
    assert enumerate_norm(R.lattice, Fraction(1, 2)) == []


def test_eichler_mass():
    """(1/24) prod (l - 1) * M prod (1 + 1/l)."""
    assert eichler_mass(2, 1) == Fraction(1, 24)
    assert eichler_mass(3, 1) == Fraction(1, 12)
    assert eichler_mass(11, 1) == Fraction(5, 12)
    assert eichler_mass(2, 3) == Fraction(1, 6)


def test_class_set_discriminant_2(classes2):
    """The Hurwitz order is alone in its class set, with 24 units."""
    assert len(classes2) == 1
    assert classes2[0].unit_count == 24
    assert classes2.mass == Fraction(1, 24)


def test_class_set_discriminant_3():
    """One class with 12 units."""
    _, order = order_builder(build_algebra(3), 1)
    datum = class_set(order, 7)
    assert len(datum) == 1
    assert datum.mass == Fraction(1, 12)


def test_class_set_discriminant_11(classes11):
    """Two classes with unit groups of order 4 and 6, certified."""
    assert len(classes11) == 2
    assert sorted(c.unit_count for c in classes11) == [4, 6]
    assert classes11.mass == Fraction(5, 12)
    assert all(c.norm.numerator % 7 for c in classes11)
    classes11.certify()
    assert all(type(x.numerator) is int for c in classes11 for b in c.ideal.basis for x in b)


def test_classset_file(classes11):
    """A written class-set file is re-read and re-certified."""
    stream = io.StringIO()
    write_classset(classes11, stream, 7, 4)
    datum, p, prec = read_classset(stream.getvalue().splitlines())
    assert (p, prec) == (7, 4)
    assert len(datum) == 2
    assert datum.mass == Fraction(5, 12)
    assert [c.unit_count for c in datum] == [c.unit_count for c in classes11]


def test_classset_file_rejects_malformed_input():
    """Missing sections raise ValueError."""
    with pytest.raises(ValueError, match="malformed class-set file"):
        read_classset(["11 1 7 4", "algebra -1 -11"])


def test_splitting_is_multiplicative(algebra11, classes11, splitting7):
    """i_p(xy) = i_p(x) i_p(y) and det i_p(x) = nr(x)."""
    q = splitting7.modulus
    basis = classes11.order.basis
    for x in basis:
        nr = algebra11.norm(x)
        assert (det(splitting7.image(x)) - nr.numerator * pow(nr.denominator, -1, q)) % q == 0
        for y in basis:
            assert splitting7.image(algebra11.mul(x, y)) == mul(splitting7.image(x), splitting7.image(y), q)


def test_splitting_requires_split_prime(algebra11, classes11):
    """The ramified prime cannot be used."""
    with pytest.raises(ValueError, match="p must split B"):
        splitting_at_p(algebra11, classes11.order.basis, 11, 3)


def test_brandt_matrix_t2(classes11):
    """T_2 has row sums 3, trace 1 and determinant -6."""
    B = brandt_matrix(hecke_elements(classes11, 2), 2)
    assert [sum(row) for row in B] == [3, 3]
    assert _trace(B) == 1
    assert B[0][0] * B[1][1] - B[0][1] * B[1][0] == -6


def test_brandt_traces_match_point_counts(classes11):
    """trace T_l = (l + 1) + a_l with a_l = l + 1 - #E(F_l)."""
    for ell in primerange(2, 50):
        if ell == 11:
            continue
        B = brandt_matrix(hecke_elements(classes11, ell), 2)
        a_ell = ell + 1 - _points_on_11a(ell)
        assert _trace(B) - (ell + 1) == a_ell, f"l = {ell}"


def test_brandt_elements_parallel_match_serial(classes11, splitting7):
    """Worker count does not change the elements."""
    assert hecke_elements(classes11, 3, splitting7, workers=4) == hecke_elements(classes11, 3, splitting7)


def test_hecke_elements_reject_ramified_index(classes11):
    """n must be prime to D M."""
    with pytest.raises(ValueError):
        hecke_elements(classes11, 11)


def test_coset_type():
    """alpha = [[p, t], [0, 1]] or [[1, 0], [0, p]] with alpha^-1 x integral."""
    assert coset_type((1, 0, 0, 7), 7) is None
    assert coset_quotient((1, 0, 0, 7), None, 7, 343) == (1, 0, 0, 1)
    assert coset_type((7, 3, 0, 1), 7) == 3
    assert coset_quotient((7, 3, 0, 1), 3, 7, 343) == (1, 0, 0, 1)
    x = (3, 1, 1, 5)
    t = coset_type(x, 7)
    assert t == 3
    w = coset_quotient(x, t, 7, 343)
    assert w == (0, 47, 1, 5)
    assert mul((7, t, 0, 1), w, 49) == tuple(v % 49 for v in x)
    with pytest.raises(ValueError):
        coset_type((1, 2, 3, 4), 7)


def test_p_level_points(classes11, splitting7):
    """X(U_1) at p=7 has 20 points and the orbits cover P_1 once per class."""
    points = p_level_classes(classes11, splitting7, 1)
    assert len(points) == 20
    assert points.orbit_sum() == points.expected_orbit_sum() == 96
    assert len(p_level_classes(classes11, splitting7, 0)) == 2
    with pytest.raises(ValueError):
        p_level_classes(classes11, splitting7, splitting7.prec)


def test_p_level_locate(classes11, splitting7):
    """Every class of P_1 is located on a point of its own orbit."""
    points = p_level_classes(classes11, splitting7, 1)
    for i in range(len(classes11)):
        for v in [(1, 0), (0, 1), (3, 5)]:
            point, g = points.locate_vector(i, v)
            assert point.cls == i
            image = points.primitive.image(g)[points.primitive.index(*point.rep)]
            assert points.primitive.rep(int(image)) == v
