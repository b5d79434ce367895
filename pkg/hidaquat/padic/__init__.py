"""
p-adic arithmetic package.

This package contains finite-precision p-adic integers, Teichmuller lifts,
tame characters, arithmetic points and the polynomial representations of
GL_2 on which weight-k forms take their values.
"""

from .arith import (
    ArithmeticPoint,
    PadicInt,
    TameCharacter,
    character_eval,
    check_prime,
    hensel_root,
    kappa_eval,
    teichmuller,
    teichmuller_table,
    twist,
    unit_roots,
    valuation,
)
from .polys import DualVec, HomPoly, action_matrix, dual_act, dual_matrix, poly_act
from . import mat2
