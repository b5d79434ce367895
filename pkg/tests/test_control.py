"""
Tests for the lift to ordinary measure forms and the control checks.
"""

import pytest
import numpy as np

from hidaquat.errors import NotDistinguishedError
from hidaquat.forms import (
    EigensystemPacket,
    eigen_lift,
    find_packet,
    interpolation_check,
    lift_specializes,
    ordinary_eigensystems,
    specialize_form,
    verify_control,
)
from hidaquat.padic import ArithmeticPoint, PadicInt

P = 7
PROBES = (2, 3, 5)


@pytest.fixture(scope="module")
def target(weight2):
    """The weight-2 packet of 11a (U_7 = 5 mod 7)."""
    return find_packet(ordinary_eigensystems(weight2, PROBES), (5, 5, 6, 1))


def _packet(multiplicity=1, vector=None, k=2):
    return EigensystemPacket(
        ArithmeticPoint.of(k, P), 1, 4, {2: PadicInt(P, 4, 5)}, PadicInt(P, 4, 5), multiplicity, frozenset(), vector
    )


def test_lift_needs_weight_2_eigenvector(measures1, weight2):
    """Packets without an eigenvector or of another weight are refused."""
    with pytest.raises(ValueError):
        eigen_lift(_packet(), measures1, weight2)
    with pytest.raises(ValueError):
        eigen_lift(_packet(k=8, vector=np.ones(20, dtype=object)), measures1, weight2)


def test_lift_refuses_inseparable_packet(measures1, weight2):
    """A multiplicity-two block cannot be lifted."""
    with pytest.raises(NotDistinguishedError, match="enlarge probe set"):
        eigen_lift(_packet(2, np.ones(20, dtype=object)), measures1, weight2)


def test_lift_refuses_zero_packet(measures1, weight2):
    """A zero eigenvector is rejected."""
    with pytest.raises(ValueError, match="zero packet input"):
        eigen_lift(_packet(1, np.zeros(20, dtype=object)), measures1, weight2)


def test_zero_form_is_degenerate(measures1, weight2):
    """verify_control on the zero form reports degenerate and fails."""
    report = verify_control(measures1.zero(), ArithmeticPoint.of(2, P), weight2, PROBES)
    assert report.degenerate
    assert not report.passed
    lines = report.lines()
    assert "control.k2.degenerate = yes" in lines
    assert lines[-1] == "control.k2.result = fail"


def test_random_form_is_not_an_eigenform(measures1, weight2, rng):
    """A random measure form specializes to a non-eigenform."""
    report = verify_control(measures1.random_form(rng), ArithmeticPoint.of(2, P), weight2, PROBES, rng)
    assert not report.degenerate
    assert not report.is_eigenform
    assert report.kernel_ok
    assert not report.passed


def test_lift_specialization_is_checked(target, measures1, weight2):
    """At level m = 1 the lift specializes to (p - 1) F, and a rescaled lift does not."""
    s = eigen_lift(target, measures1, weight2, verify=False)
    assert lift_specializes(s, target, weight2)
    assert not lift_specializes(s.scale(2), target, weight2)
    assert not lift_specializes(measures1.zero(), target, weight2)


@pytest.mark.slow
def test_control_along_the_family(target, measures2, weight2, weight8, rng):
    """The lift specializes to eigenforms at weights 2 and 8 with congruent eigenvalues."""
    s = eigen_lift(target, measures2, weight2)
    assert s.is_invariant()
    kappa2 = ArithmeticPoint(2, target.kappa.family_character(2))
    F = specialize_form(s, kappa2, weight2)
    assert F.prec == 2
    assert F.valuation() == 0

    report2 = verify_control(s, kappa2, weight2, PROBES, rng)
    assert report2.passed
    assert report2.up == target.up

    kappa8 = ArithmeticPoint(8, target.kappa.family_character(8))
    report8 = verify_control(s, kappa8, weight8, PROBES, rng)
    assert report8.passed, "\n".join(report8.lines())
    assert report8.packet is not None
    assert report8.packet.residues() == target.residues()
    assert interpolation_check(target, report8.packet).passed
