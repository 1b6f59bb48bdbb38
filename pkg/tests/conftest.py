import os
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from deltahomog.algebra import TableAlgebra
from deltahomog.metric import MetricParams, ReductiveSplit
from deltahomog.roots import RootVector, build_root_system
from deltahomog.so5 import build_so5_u2
from deltahomog.structure import build_bracket_table

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def table(family: str, rank: int):
    return build_bracket_table(build_root_system(family, rank))


def b2_vec(t, alpha, kind="u"):
    return np.array([float(x) for x in t.root_element(RootVector.of(*alpha), kind)])


@lru_cache(maxsize=None)
def b2_split():
    """h = t + V(e1-e2), p2 = V(e1+e2), p1 = V(e1) + V(e2) inside the abstract B2 table."""
    t = table("B", 2)
    h = [np.eye(t.dim)[0], np.eye(t.dim)[1], b2_vec(t, (1, -1)), b2_vec(t, (1, -1), "v")]
    p2 = [b2_vec(t, (1, 1)), b2_vec(t, (1, 1), "v")]
    p1 = [b2_vec(t, a, k) for a in ((1, 0), (0, 1)) for k in "uv"]
    return ReductiveSplit(TableAlgebra(t), h, p1, p2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def so5_15():
    return build_so5_u2(MetricParams(1.0, 1.5))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
