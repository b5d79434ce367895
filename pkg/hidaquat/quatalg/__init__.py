"""
Quaternion algebra package initialization.

This package contains definite quaternion algebras over Q, lattices and
short-vector enumeration, maximal and Eichler orders, right-ideal class sets,
local splittings at p, the p-level point sets X(U_r) and the Brandt elements
that realize the Hecke operators.
"""

from .algebra import (
    ALGEBRA_TABLE,
    INFINITY,
    Quaternion,
    QuaternionAlgebra,
    build_algebra,
    hilbert_reciprocity,
    hilbert_symbol,
    quaternion,
)
from .lattice import Lattice, enumerate_norm, hnf, lll_reduce, short_vectors
from .orders import (
    MAXIMAL_ORDER_TABLE,
    QuatOrder,
    certify_order,
    eichler_order,
    maximal_order,
    order_builder,
    order_from_lattice,
    reduced_discriminant,
)
from .splitting import SplittingData, companion_images, splitting_at_p
from .classset import (
    ClassSetDatum,
    IdealClass,
    class_set,
    eichler_mass,
    ideal_norm,
    is_equivalent,
    left_order,
    neighbors,
    read_classset,
    unit_group,
    write_classset,
)
from .plevel import PLevelClassSet, PLevelPoint, p_level_classes
from .hecke import BrandtElement, brandt_matrix, coset_quotient, coset_type, hecke_elements
