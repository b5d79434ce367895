"""
Command-line interface.

    hidaquat <command> [--D 11] [--p 7] [--weights 2,8] ...

Commands are the registered suites. Reports go to stdout and to
<out>/<command>.report; logs go to stderr.

Exit codes: 0 pass, 1 verification failure, 2 configuration error.
"""

import os
import sys
import argparse
import logging
from typing import List, Optional

from .config import create_config
from .errors import ConfigError, NotDistinguishedError, PrecisionError, VerificationError
from .suites import get_available_suites, run_suite

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

# command-line flag -> config key
FLAGS = {
    "D": "D",
    "M": "M",
    "p": "p",
    "level_m": "m",
    "prec": "prec",
    "weights": "weights",
    "char_exp": "char_exp",
    "probes": "probes",
    "classset_file": "classset_file",
    "out": "out_dir",
    "workers": "workers",
    "seed": "seed",
    "up_residue": "target",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hidaquat", description="Measure-valued quaternionic forms and the control theorem")
    parser.add_argument("command", choices=sorted(get_available_suites()))
    parser.add_argument("--D", type=int, help="discriminant of the definite algebra")
    parser.add_argument("--M", type=int, help="Eichler level")
    parser.add_argument("--p", type=int, help="prime p >= 5 not dividing DM")
    parser.add_argument("--level-m", dest="level_m", type=int, help="measure level m")
    parser.add_argument("--prec", type=int, help="precision M of the coefficients Z/p^M")
    parser.add_argument("--weights", help="comma-separated weights")
    parser.add_argument("--char-exp", dest="char_exp", type=int, help="exponent j of the tame character omega^j")
    parser.add_argument("--probes", help="comma-separated probe primes")
    parser.add_argument("--classset-file", dest="classset_file", help="load the class set instead of computing it")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="worker threads for enumeration and assembly")
    parser.add_argument("--seed", type=int, help="seed of the random spot checks")
    parser.add_argument("--up-residue", dest="up_residue", type=int, help="U_p residue of the target packet")
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument("--n", type=int, help="index n of T_n (brandt)")
    parser.add_argument("--k", type=int, help="weight (brandt, eigen)")
    parser.add_argument("--r", type=int, help="level r of U_r (brandt, eigen)")
    return parser


def configure_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else getattr(logging, os.getenv("HIDAQUAT_LOG_LEVEL", "INFO").upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler()
        ]
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    overrides = {key: getattr(args, flag) for flag, key in FLAGS.items()}
    if args.command not in ("control", "interp"):
        overrides["interpolation"] = False
    options = {"n": args.n, "k": args.k, "r": args.r}

    try:
        config = create_config(overrides, config_file=args.config)
        result = run_suite(args.command, config, options)
    except (ConfigError, PrecisionError) as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (VerificationError, NotDistinguishedError) as e:
        logger.error(f"Verification failed: {e}")
        print(f"{args.command}.error = {e}")
        print(f"{args.command}.result = fail")
        return EXIT_FAIL
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    report = result.report()
    path = os.path.join(config.out_dir, f"{args.command}.report")
    try:
        os.makedirs(config.out_dir, exist_ok=True)
        with open(path, "w") as f:
            f.write(report)
    except Exception as e:
        logger.error(f"Error writing report to {path}: {e}")
        raise
    sys.stdout.write(report)
    return EXIT_PASS if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
