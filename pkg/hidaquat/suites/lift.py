"""Lift of the target weight-2 eigenform to an ordinary measure form."""

import logging

from ..forms import eigen_lift, lift_specializes, ordinary_eigensystems, write_measure_form
from .common import Pipeline, SuiteResult

SUITE_NAME = "lift"

logger = logging.getLogger(__name__)


def lift_target(pipeline: Pipeline, result: SuiteResult, label: str):
    """Weight-2 packets, the chosen target and its lift s; report lines go to result."""
    cfg = pipeline.config
    w2 = pipeline.weight_space(2)
    packets = ordinary_eigensystems(w2, cfg.probes, pipeline.base_character())
    target = pipeline.select_target(packets)
    result.lines += target.lines(f"{label}.target")
    mspace = pipeline.measure_space()
    result.lines += [f"{label}.measure_dim = {mspace.dim}", f"{label}.level_m = {mspace.m}"]
    s = eigen_lift(target, mspace, w2, cfg.probes, verify=False)
    result.check(f"{label}.specialization", lift_specializes(s, target, w2), f"  [mod {cfg.p}^{min(cfg.prec, cfg.m)}]")
    return target, s


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    result = SuiteResult(SUITE_NAME)
    _, s = lift_target(pipeline, result, "lift")
    path = pipeline.output_path(f"lift_{pipeline.tag()}_m{cfg.m}.mform")
    try:
        with open(path, "w") as f:
            write_measure_form(s, f)
    except Exception as e:
        logger.error(f"Error writing measure form to {path}: {e}")
        raise
    result.wrote("lift.file", path)
    return result
