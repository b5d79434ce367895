"""Congruences between ordinary eigensystems of different weights, without the lift."""

import logging

from ..forms import find_packet, interpolation_check, ordinary_eigensystems
from ..padic import ArithmeticPoint
from .common import Pipeline, SuiteResult

SUITE_NAME = "interp"

logger = logging.getLogger(__name__)


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    result = SuiteResult(SUITE_NAME)
    base = cfg.weights[0]
    kappa = ArithmeticPoint(base, pipeline.base_character())
    packets = ordinary_eigensystems(pipeline.weight_space(base), cfg.probes, kappa.eps)
    target = pipeline.select_target(packets)
    result.lines += target.lines(f"interp.k{base}")
    for k in cfg.weights[1:]:
        label = f"interp.k{base}_k{k}"
        found = ordinary_eigensystems(pipeline.weight_space(k), cfg.probes, kappa.family_character(k))
        match = find_packet(found, target.residues())
        if match is None:
            logger.warning(f"No weight-{k} packet with residues {target.residues()}")
            result.check(f"{label}.packet", False)
            continue
        result.lines += match.lines(f"interp.k{k}")
        result.check(f"{label}.multiplicity", match.multiplicity == 1)
        if match.multiplicity != 1:
            continue
        report = interpolation_check(target, match)
        result.lines += report.lines(label)
        result.passed = result.passed and report.passed
    return result
