"""
Suites package initialization.

This module provides functions to discover and register suite modules.
Each suite module implements one command of the command-line interface
and is registered under its SUITE_NAME.
"""

import os
import importlib
import logging

from .common import Pipeline, SuiteResult

# Set up logger
logger = logging.getLogger(__name__)

# Dictionary to store registered suite modules
_suites = {}


def register_suite(name, module):
    """
    Register a suite module.

    Args:
        name (str): Unique command name of the suite
        module: The suite module to register; it must provide run(pipeline, options)
    """
    if name in _suites:
        logger.warning(f"Suite '{name}' already registered. Overwriting.")

    _suites[name] = module
    logger.debug(f"Registered suite module: {name}")


def get_available_suites():
    """
    Get a dictionary of all registered suites, discovering them on first use.

    Returns:
        dict: Dictionary of suite names to their modules
    """
    if not _suites:
        discover_suites()
    return _suites


def discover_suites():
    """Import every module of this package that defines SUITE_NAME and run()."""
    suites_path = os.path.dirname(__file__)

    for filename in sorted(os.listdir(suites_path)):
        if filename in ("__init__.py", "common.py") or not filename.endswith(".py"):
            continue

        module_name = filename[:-3]
        try:
            module = importlib.import_module(f"{__name__}.{module_name}")
        except Exception as e:
            logger.error(f"Error importing suite module {module_name}: {e}")
            raise

        if hasattr(module, "run"):
            register_suite(getattr(module, "SUITE_NAME", module_name), module)
        else:
            logger.warning(f"Module {module_name} doesn't implement run()")

    logger.debug(f"Registered {len(_suites)} suite modules")


def run_suite(name, config, options=None):
    """
    Run one registered suite.

    Args:
        name (str): Command name
        config (JobConfig): Validated job configuration
        options (dict): Command options such as n, k and r for brandt

    Returns:
        SuiteResult: report lines, written files and the pass flag

    Raises:
        KeyError: if no suite is registered under name
    """
    suites = get_available_suites()
    if name not in suites:
        raise KeyError(f"unknown suite '{name}', available: {sorted(suites)}")
    logger.info(f"Running suite {name}")
    result = suites[name].run(Pipeline(config), dict(options or {}))
    logger.info(f"Suite {name}: {'pass' if result.passed else 'fail'}")
    return result


__all__ = ["Pipeline", "SuiteResult", "discover_suites", "get_available_suites", "register_suite", "run_suite"]
