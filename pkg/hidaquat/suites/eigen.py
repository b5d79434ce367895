"""Ordinary eigensystems of S_k(U_r, eps) for one weight."""

import logging

from ..forms import cuspidal, ordinary_eigensystems, write_packets
from ..padic import ArithmeticPoint
from .common import Pipeline, SuiteResult, option

SUITE_NAME = "eigen"

logger = logging.getLogger(__name__)


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    k = option(options, "k", cfg.weights[0])
    r = option(options, "r", 1)
    result = SuiteResult(SUITE_NAME)
    space = pipeline.weight_space(k, r)
    # the character carried by weight k on the family through the base weight
    eps = ArithmeticPoint(cfg.weights[0], pipeline.base_character()).family_character(k)
    packets = ordinary_eigensystems(space, cfg.probes, eps)
    result.lines += [
        f"eigen.weight = {k}",
        f"eigen.level_r = {r}",
        f"eigen.char_exp = {eps.j}",
        f"eigen.dim = {space.dim}",
        f"eigen.packets = {len(packets)}",
        f"eigen.cuspidal = {len(cuspidal(packets))}",
    ]
    for index, pk in enumerate(packets):
        result.lines += pk.lines(f"eigen.packet{index}")
    path = pipeline.output_path(f"packets_{pipeline.tag()}_k{k}_r{r}.txt")
    try:
        with open(path, "w") as f:
            write_packets(packets, f)
    except Exception as e:
        logger.error(f"Error writing packets to {path}: {e}")
        raise
    result.wrote("eigen.file", path)
    return result
