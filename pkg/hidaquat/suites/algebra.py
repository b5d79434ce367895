"""Algebra, order and discriminant certificates."""

import os
import logging

from ..errors import ConfigError
from ..quatalg import INFINITY, build_algebra, eichler_mass, hilbert_reciprocity, order_builder, reduced_discriminant
from .common import Pipeline, SuiteResult

SUITE_NAME = "algebra"

logger = logging.getLogger(__name__)


def _place(v) -> str:
    return "inf" if v == INFINITY else str(v)


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    result = SuiteResult(SUITE_NAME)
    result.lines += [f"algebra.D = {cfg.D}", f"algebra.M = {cfg.M}"]
    if cfg.classset_file:
        # the file carries the algebra and order; traversal is skipped
        classes = pipeline.classes
        B, order = classes.algebra, classes.order
        result.lines.append(f"algebra.classset_file = {os.path.basename(cfg.classset_file)}")
    else:
        try:
            B = build_algebra(cfg.D)
        except ValueError as e:
            raise ConfigError(str(e))
        _, order = order_builder(B, cfg.M)
    result.lines.append(f"algebra.ab = ({B.a},{B.b})")
    result.lines.append(f"algebra.ramified = {{{','.join(_place(v) for v in B.ramified_places())}}}")
    result.check("algebra.definite", B.is_definite)
    result.check("algebra.hilbert_reciprocity", hilbert_reciprocity(B))
    result.check("algebra.discriminant", B.discriminant == cfg.D)
    disc = reduced_discriminant(B, order.lattice)
    result.lines.append(f"algebra.order_discriminant = {disc}")
    result.check("algebra.order_certificate", disc == cfg.D * cfg.M)
    if cfg.classset_file:
        classes = pipeline.classes
        result.lines.append(f"algebra.classes = {len(classes)}")
        result.lines.append(f"algebra.mass = {classes.mass}")
        result.check("algebra.mass_certificate", classes.mass == eichler_mass(cfg.D, cfg.M))
    return result
