"""
The full control pipeline.

Class set, splitting, weight-2 eigensystems, the lift to the ordinary
measure forms, then the control checks at every requested weight and the
congruences between the weight-2 packet and each weight-k packet.
"""

import logging

import numpy as np

from ..forms import interpolation_check, verify_control
from ..padic import ArithmeticPoint
from .common import Pipeline, SuiteResult
from .lift import lift_target

SUITE_NAME = "control"

logger = logging.getLogger(__name__)


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    result = SuiteResult(SUITE_NAME)
    result.lines += cfg.lines()
    result.lines.append(f"control.classes = {len(pipeline.classes)}")
    target, s = lift_target(pipeline, result, "control")
    rng = np.random.default_rng(cfg.seed)
    for k in cfg.weights:
        label = f"control.k{k}"
        space = pipeline.weight_space(k)
        kappa = ArithmeticPoint(k, target.kappa.family_character(k))
        report = verify_control(s, kappa, space, cfg.probes, rng)
        result.lines += report.lines(label)
        result.passed = result.passed and report.passed
        if k == 2:
            continue
        if report.packet is None:
            result.check(f"interp.k2_k{k}.packet", False)
            continue
        interp = interpolation_check(target, report.packet)
        result.lines += interp.lines(f"interp.k2_k{k}")
        result.passed = result.passed and interp.passed
    return result
