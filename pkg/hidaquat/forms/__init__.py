"""
Quaternionic modular forms package initialization.

This package contains the classical weight-k forms at level U_r, the
measure-valued forms at level U_0, their Hecke, diamond and projector
operators, ordinary eigensystem extraction, the lift of a weight-2 eigenform
to the ordinary measure forms, and the control and interpolation checks.
"""

from .operators import OperatorMatrix, read_matrix, write_matrix
from .weightk import WeightKForm, WeightKSpace, character_projector, diamond, hecke_on_weightk
from .measureforms import (
    MeasureForm,
    MeasureFormSpace,
    hecke_on_measureform,
    pkappa_mult_form,
    read_measure_form,
    tame_projector,
    tp_measure,
    write_measure_form,
)
from .eigen import (
    EISENSTEIN,
    NON_RATIONAL,
    NOT_P_DISTINGUISHED,
    EigensystemPacket,
    OrdinaryPart,
    cuspidal,
    find_packet,
    ordinary_eigensystems,
    ordinary_part,
    ordinary_projector,
    read_packets,
    write_packets,
)
from .control import (
    ControlReport,
    InterpolationReport,
    eigen_lift,
    interpolation_check,
    lift_specializes,
    specialize_form,
    verify_control,
)
