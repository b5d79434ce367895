"""
Shared pipeline stages for the suites.

A Pipeline builds the class set, the splitting and the form spaces of one
job on demand and keeps them, so every stage of a suite works over the same
objects.
"""

import os
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..config import JobConfig
from ..errors import ConfigError, NotDistinguishedError
from ..forms import EigensystemPacket, MeasureFormSpace, WeightKSpace, cuspidal
from ..padic import TameCharacter
from ..quatalg import (
    ClassSetDatum,
    SplittingData,
    build_algebra,
    class_set,
    order_builder,
    read_classset,
    splitting_at_p,
)

logger = logging.getLogger(__name__)


def option(options: dict, key: str, default):
    """A suite option, or default when it was not given (0 is a value)."""
    value = options.get(key)
    return default if value is None else value


@dataclass
class SuiteResult:
    """Report lines of one suite run and the files it wrote."""

    name: str
    lines: List[str] = field(default_factory=list)
    passed: bool = True
    files: List[str] = field(default_factory=list)

    def check(self, key: str, ok: bool, suffix: str = ""):
        """Append a pass/fail line and fold it into the overall result."""
        self.lines.append(f"{key} = {'pass' if ok else 'fail'}{suffix}")
        self.passed = self.passed and ok

    def wrote(self, key: str, path: str):
        """Record an output file; reports name it relative to the output directory."""
        self.files.append(path)
        self.lines.append(f"{key} = {os.path.basename(path)}")

    def report(self) -> str:
        return "\n".join(self.lines + [f"{self.name}.result = {'pass' if self.passed else 'fail'}"]) + "\n"


class Pipeline:
    """Lazily built stages of a job."""

    def __init__(self, config: JobConfig):
        self.config = config
        self._classes: Optional[ClassSetDatum] = None
        self._splittings: Dict[int, SplittingData] = {}
        self._spaces: Dict[Tuple[int, int, int], WeightKSpace] = {}
        self._mspace: Optional[MeasureFormSpace] = None

    @property
    def p(self) -> int:
        return self.config.p

    @property
    def classes(self) -> ClassSetDatum:
        if self._classes is None:
            cfg = self.config
            if cfg.classset_file:
                self._classes = self._load_classes(cfg.classset_file)
            else:
                try:
                    B = build_algebra(cfg.D)
                except ValueError as e:
                    raise ConfigError(str(e))
                _, order = order_builder(B, cfg.M)
                self._classes = class_set(order, cfg.p)
        return self._classes

    def _load_classes(self, path: str) -> ClassSetDatum:
        cfg = self.config
        if not os.path.exists(path):
            raise ConfigError(f"class-set file {path} does not exist")
        with open(path) as f:
            datum, _, _ = read_classset(f)
        if (datum.D, datum.M) != (cfg.D, cfg.M):
            raise ConfigError(f"class-set file is for D={datum.D}, M={datum.M}, job has D={cfg.D}, M={cfg.M}")
        if any((c.norm.numerator * c.norm.denominator) % cfg.p == 0 for c in datum):
            raise ConfigError(f"class-set file has ideals of norm divisible by p={cfg.p}")
        return datum

    def splitting(self, r: int = 1) -> SplittingData:
        """A splitting precise enough for weight-k spaces of level r and the measure forms."""
        cfg = self.config
        N = max(cfg.prec + r + 1, cfg.m + 1, cfg.prec + 2)
        if N not in self._splittings:
            B = self.classes.algebra
            try:
                self._splittings[N] = splitting_at_p(B, self.classes.order.basis, cfg.p, N)
            except ValueError as e:
                raise ConfigError(str(e))
        return self._splittings[N]

    def weight_space(self, k: int, r: int = 1, prec: Optional[int] = None) -> WeightKSpace:
        prec = prec or self.config.prec
        key = (k, r, prec)
        if key not in self._spaces:
            self._spaces[key] = WeightKSpace(self.classes, self.splitting(r), k, r, prec, self.config.workers)
        return self._spaces[key]

    def measure_space(self) -> MeasureFormSpace:
        if self._mspace is None:
            cfg = self.config
            self._mspace = MeasureFormSpace(self.classes, self.splitting(1), cfg.m, cfg.prec, cfg.workers)
        return self._mspace

    def base_character(self) -> TameCharacter:
        return TameCharacter(self.config.p, self.config.char_exp)

    def select_target(self, packets: List[EigensystemPacket]) -> EigensystemPacket:
        """
        The cuspidal packet to follow along the family.

        Raises:
            NotDistinguishedError: if no multiplicity-one cuspidal packet
                matches the requested U_p residue.
        """
        target = self.config.target % self.p
        candidates = [pk for pk in cuspidal(packets) if pk.multiplicity == 1 and not pk.flags]
        if target:
            candidates = [pk for pk in candidates if pk.up.value % self.p == target]
        if not candidates:
            residue = f" with U_{self.p} = {target} mod {self.p}" if target else ""
            raise NotDistinguishedError(f"no distinguished cuspidal packet{residue}; enlarge probe set")
        chosen = candidates[0]
        logger.info(f"Target packet: U_{self.p} = {chosen.up.signed()}, residues {chosen.residues()}")
        return chosen

    def output_path(self, filename: str) -> str:
        os.makedirs(self.config.out_dir, exist_ok=True)
        return os.path.join(self.config.out_dir, filename)

    def tag(self) -> str:
        return f"D{self.config.D}_M{self.config.M}_p{self.config.p}"
