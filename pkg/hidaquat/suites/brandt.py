"""Hecke operator T_n on a weight-k space, with the ordinary eigensystems of the space."""

import logging

from sympy import divisor_sigma

from ..forms import ordinary_eigensystems, write_matrix, write_packets
from ..linalg import charpoly
from .common import Pipeline, SuiteResult, option

SUITE_NAME = "brandt"

logger = logging.getLogger(__name__)


def _signed(c: int, q: int) -> int:
    c %= q
    return c - q if c > q // 2 else c


def run(pipeline: Pipeline, options: dict) -> SuiteResult:
    cfg = pipeline.config
    n = option(options, "n", 2)
    k = option(options, "k", 2)
    r = option(options, "r", 0)
    result = SuiteResult(SUITE_NAME)
    space = pipeline.weight_space(k, r)
    T = space.hecke(n)
    q = space.q
    result.lines += [
        f"brandt.n = {n}",
        f"brandt.weight = {k}",
        f"brandt.level_r = {r}",
        f"brandt.dim = {T.dim}",
        f"brandt.charpoly = {','.join(str(_signed(c, q)) for c in charpoly(T.matrix, q))}  [mod {cfg.p}^{space.prec}]",
    ]
    if k == 2 and r == 0:
        sigma = int(divisor_sigma(n))
        result.check("brandt.row_sums", all(s == sigma % q for s in T.row_sums()), f"  [mod {cfg.p}^{space.prec}]")

    tag = f"{pipeline.tag()}_n{n}_k{k}_r{r}"
    matrix_path = pipeline.output_path(f"brandt_{tag}.mat")
    packets_path = pipeline.output_path(f"packets_{tag}.txt")
    packets = ordinary_eigensystems(space, cfg.probes, pipeline.base_character())
    try:
        with open(matrix_path, "w") as f:
            write_matrix(T, f)
        with open(packets_path, "w") as f:
            write_packets(packets, f)
    except Exception as e:
        logger.error(f"Error writing Brandt output: {e}")
        raise
    for index, pk in enumerate(packets):
        result.lines += pk.lines(f"brandt.packet{index}")
    result.wrote("brandt.matrix_file", matrix_path)
    result.wrote("brandt.packet_file", packets_path)
    return result
