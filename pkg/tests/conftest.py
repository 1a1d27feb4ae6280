import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture
def grid64():
    from adsmodes.modes2 import chebyshev_grid

    return chebyshev_grid(64)


def angles(d):
    return tuple([math.pi / 2] * (d - 3) + [0.0])


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def max_abs(x):
    return float(np.max(np.abs(x)))


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
