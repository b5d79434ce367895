"""
Pytest configuration and fixtures for the hidaquat tests.

This module contains shared fixtures that can be used across different test
modules: the D=11 and D=2 class sets, the splitting at p=7 and the weight-k
and measure form spaces built over them.
"""

import os
import pytest
import numpy as np

from hidaquat.config import ENV_PREFIX, create_config
from hidaquat.forms import MeasureFormSpace, WeightKSpace
from hidaquat.quatalg import build_algebra, class_set, order_builder, splitting_at_p

P = 7
PREC = 4
PROBES = (2, 3, 5)


@pytest.fixture(scope="session")
def algebra11():
    """The definite algebra (-1, -11) of discriminant 11."""
    return build_algebra(11)


@pytest.fixture(scope="session")
def classes11(algebra11):
    """Class set of the maximal order of discriminant 11 (two classes)."""
    _, order = order_builder(algebra11, 1)
    return class_set(order, P)


@pytest.fixture(scope="session")
def classes2():
    """Class set of the maximal order of discriminant 2 (one class)."""
    _, order = order_builder(build_algebra(2), 1)
    return class_set(order, P)


@pytest.fixture(scope="session")
def splitting7(classes11):
    """Splitting at 7 precise enough for level 1 at precision 4 and measures of level 2."""
    return splitting_at_p(classes11.algebra, classes11.order.basis, P, PREC + 2)


@pytest.fixture(scope="session")
def level0(classes11, splitting7):
    """Weight 2, level U_0: the Brandt module of discriminant 11."""
    return WeightKSpace(classes11, splitting7, 2, 0, PREC)


@pytest.fixture(scope="session")
def weight2(classes11, splitting7):
    return WeightKSpace(classes11, splitting7, 2, 1, PREC)


@pytest.fixture(scope="session")
def weight8(classes11, splitting7):
    return WeightKSpace(classes11, splitting7, 8, 1, PREC)


@pytest.fixture(scope="session")
def measures1(classes11, splitting7):
    """Measure forms of level 1 (quick, precision of specialization 1)."""
    return MeasureFormSpace(classes11, splitting7, 1, PREC)


@pytest.fixture(scope="session")
def measures2(classes11, splitting7):
    """Measure forms of level 2."""
    return MeasureFormSpace(classes11, splitting7, 2, PREC)


@pytest.fixture
def rng():
    """A seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove any HIDAQUAT_* variables from the environment."""
    for name in list(os.environ):
        if name.startswith(ENV_PREFIX):
            monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def config(clean_env, tmp_path):
    """Default job configuration writing into a temporary directory."""
    return create_config({"out_dir": str(tmp_path)})
