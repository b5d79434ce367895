"""
Truncated p-adic measures package.

This package contains the index of primitive classes, truncated measures
with their matrix and Iwasawa-algebra actions, and the specialization maps
and P_kappa membership tests.
"""

from .classes import PrimitiveClasses, primitive_classes
from .truncated import (
    LambdaElement,
    TruncatedMeasure,
    coarsen,
    dirac,
    integrate,
    lambda_act,
    matrix_pushforward,
    pkappa_mult,
    random_measure,
    read_measure,
    scalar_act,
    uniform,
    write_measure,
    zero_measure,
)
from .specialization import (
    DEFINITE,
    INDEFINITE,
    MembershipReport,
    in_Pkappa,
    line_representatives,
    psi_integral,
    sigma_m,
    specialize,
)
