"""Right-ideal class set of the Eichler order, written to the output directory."""

import logging

from ..quatalg import eichler_mass, write_classset
from .common import Pipeline, SuiteResult

SUITE_NAME = "classset"

logger = logging.getLogger(__name__)


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    result = SuiteResult(SUITE_NAME)
    classes = pipeline.classes
    classes.certify()
    expected = eichler_mass(cfg.D, cfg.M)
    result.lines += [
        f"classset.D = {cfg.D}",
        f"classset.M = {cfg.M}",
        f"classset.classes = {len(classes)}",
        f"classset.unit_orders = {','.join(str(c.unit_count) for c in classes)}",
        f"classset.mass = {classes.mass}",
        f"classset.expected_mass = {expected}",
    ]
    result.check("classset.mass_certificate", classes.mass == expected)
    path = pipeline.output_path(f"classset_D{cfg.D}_M{cfg.M}.txt")
    try:
        with open(path, "w") as f:
            write_classset(classes, f, cfg.p, cfg.prec)
    except Exception as e:
        logger.error(f"Error writing class set to {path}: {e}")
        raise
    result.wrote("classset.file", path)
    return result
