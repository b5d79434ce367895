"""
Tests for truncated measures and their specialization.
"""

import io

import pytest
import numpy as np

from hidaquat.errors import PrecisionError
from hidaquat.measures import (
    DEFINITE,
    INDEFINITE,
    LambdaElement,
    coarsen,
    dirac,
    in_Pkappa,
    integrate,
    line_representatives,
    matrix_pushforward,
    pkappa_mult,
    primitive_classes,
    psi_integral,
    random_measure,
    read_measure,
    scalar_act,
    sigma_m,
    specialize,
    uniform,
    write_measure,
)
from hidaquat.padic import ArithmeticPoint, DualVec, dual_act
from hidaquat.padic.mat2 import mul


def test_primitive_class_counts():
    """|P_m| = p^2m - p^(2m-2)."""
    assert primitive_classes(7, 1).size == 48
    assert primitive_classes(7, 2).size == 2352
    classes = primitive_classes(7, 2)
    assert classes.rep(classes.index(3, 14)) == (3, 14)
    with pytest.raises(KeyError):
        classes.index(7, 14)


def test_pushforward_is_a_left_action(rng):
    """g.(h.nu) = (gh).nu."""
    nu = random_measure(7, 2, 4, rng)
    g, h = (1, 2, 3, 5), (2, 1, 1, 1)
    assert matrix_pushforward(g, matrix_pushforward(h, nu)) == matrix_pushforward(mul(g, h, 49), nu)


def test_pushforward_reports_dropped_mass():
    """Mass sent to non-primitive classes is discarded and counted."""
    nu = dirac(7, 2, 4, (0, 1))
    moved = matrix_pushforward((1, 0, 0, 7), nu)
    assert moved.is_zero()
    assert moved.dropped == 1
    kept = matrix_pushforward((7, 0, 0, 1), nu)
    assert kept == nu
    assert kept.dropped == 0


def test_scalar_action_inverts(rng):
    """[3][3^-1] acts trivially."""
    nu = random_measure(7, 2, 4, rng)
    assert scalar_act(pow(3, -1, 49), scalar_act(3, nu)) == nu


def test_coarsen_commutes_with_pushforward(rng):
    """Coarsening to level 1 commutes with GL_2(Z_p) and keeps the total mass."""
    nu = random_measure(7, 2, 4, rng)
    g = (1, 2, 3, 5)
    assert coarsen(matrix_pushforward(g, nu), 1) == matrix_pushforward(g, coarsen(nu, 1))
    assert coarsen(nu, 1).total_mass() == nu.total_mass()


def test_integrate_step_functions():
    """The constant function integrates to the number of balls; finer steps are refused."""
    nu = uniform(7, 2, 4)
    assert integrate(nu, lambda x, y: 1, 1) == 2352
    assert integrate(nu, {(1, 0): 5}, 1) == 5 * 49
    with pytest.raises(PrecisionError, match="insufficient measure level"):
        integrate(nu, lambda x, y: 1, 3)


def test_lambda_element_products():
    """Group-like elements multiply by multiplying their units."""
    product = LambdaElement.group_like(7, 2, 3) * LambdaElement.group_like(7, 2, 5)
    assert product == LambdaElement(7, 2, ((1, 15),))
    kappa = ArithmeticPoint.of(2, 7)
    generator = LambdaElement.pkappa_generator(kappa, 2)
    assert generator.terms == ((48, 1), (1, 8))


def test_specialization_precision_and_region():
    """Specialization has precision min(M, m); the regions pick eps(x) or eps(y)."""
    kappa = ArithmeticPoint.of(4, 7)
    nu = dirac(7, 2, 4, (1, 7))
    phi = specialize(nu, kappa)
    assert phi.prec == 2
    assert phi.values == (0, 7, 1)
    assert specialize(nu, kappa, INDEFINITE).is_zero()
    assert psi_integral(nu, kappa, 1, DEFINITE) == 1
    assert sigma_m(nu, kappa, 2).is_zero()
    with pytest.raises(ValueError):
        specialize(nu, kappa, "other")


@pytest.mark.parametrize("k", [2, 8])
def test_pkappa_multiples_specialize_to_zero(rng, k):
    """([1+p] - chi(1+p)) nu lies in the kernel of specialization and passes the membership test."""
    kappa = ArithmeticPoint.of(k, 7)
    for _ in range(5):
        nu = pkappa_mult(random_measure(7, 2, 4, rng), kappa)
        assert specialize(nu, kappa).is_zero()
        assert in_Pkappa(nu, kappa).passed


def test_membership_test_finds_witness():
    """A Dirac mass on the definite region is not in P_kappa D."""
    kappa = ArithmeticPoint.of(2, 7)
    report = in_Pkappa(dirac(7, 2, 4, (1, 0)), kappa)
    assert not report.passed
    assert report.witness is not None
    assert report.lines()[0].startswith("in_Pkappa = fail")


def test_line_representatives():
    """There are p^m + p^(m-1) lines mod p^m."""
    assert len(line_representatives(7, 2)) == 49 + 7


def test_read_measure_rejects_bad_header():
    """Malformed measure files raise ValueError."""
    with pytest.raises(ValueError):
        read_measure(["7 two 4"])


def test_write_measure_is_sorted():
    """Nonzero classes are written in lexicographic order."""
    nu = dirac(7, 1, 2, (3, 0)) + dirac(7, 1, 2, (0, 5)).scale(2)
    stream = io.StringIO()
    write_measure(nu, stream)
    assert stream.getvalue() == "7 1 2\n0 5 2\n3 0 1\n"
    assert read_measure(stream.getvalue().splitlines()) == nu


@pytest.mark.parametrize("k, j", [(2, 0), (4, 1), (8, 3)])
def test_specialization_is_iwahori_equivariant(rng, k, j):
    """specialize(g.nu) = eps(a) g.specialize(nu) for g = [[a, b], [c, d]] with c = 0 mod p."""
    kappa = ArithmeticPoint.of(k, 7, j)
    for g in [(3, 5, 14, 2), (1, 1, 7, 1), (6, 48, 21, 4)]:
        nu = random_measure(7, 2, 4, rng)
        phi = specialize(nu, kappa)
        eps_a = kappa.eps.value(g[0], phi.prec)
        expected = DualVec(7, phi.prec, tuple(eps_a * v for v in dual_act(g, phi).values))
        assert specialize(matrix_pushforward(g, nu), kappa) == expected


def test_specialization_vanishes_after_p_diagonal(rng):
    """[[p, 0], [0, 1]] moves every primitive class off the definite region."""
    kappa = ArithmeticPoint.of(4, 7, 1)
    for _ in range(3):
        nu = random_measure(7, 2, 4, rng)
        assert specialize(matrix_pushforward((7, 0, 0, 1), nu), kappa).is_zero()


def test_specialization_commutes_with_coarsening(rng):
    """Specializing at level 1 equals specializing at level 2 and reducing mod p."""
    kappa = ArithmeticPoint.of(4, 7, 1)
    nu = random_measure(7, 2, 4, rng)
    coarse = coarsen(nu, 1)
    assert specialize(coarse, kappa) == specialize(nu, kappa).reduce(1)
    assert specialize(coarse, kappa, INDEFINITE) == specialize(nu, kappa, INDEFINITE).reduce(1)
    assert sigma_m(coarse, kappa, 1) == sigma_m(nu, kappa, 1).reduce(1)
    assert sigma_m(coarse, kappa, 1, INDEFINITE) == sigma_m(nu, kappa, 1, INDEFINITE).reduce(1)
    assert psi_integral(coarse, kappa, 1).value == psi_integral(nu, kappa, 1).reduce(1).value
