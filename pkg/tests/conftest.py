import sys

import numpy as np
import pytest

from frechet_jl import Curve


def random_curve(rng, m, d=2, scale=1.0, id=""):
    return Curve(rng.normal(scale=scale, size=(m, d)), id=id)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
