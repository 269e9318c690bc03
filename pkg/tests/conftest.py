import shutil

import numpy as np
import pytest

from cointforecast.datasets import fixture_dir


def random_walk(n, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    return np.cumsum(rng.normal(0.0, scale, n))


def ar1(n, phi, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    e = rng.normal(0.0, scale, n)
    u = np.zeros(n)
    for t in range(1, n):
        u[t] = phi * u[t - 1] + e[t]
    return u


@pytest.fixture
def fixture_config(tmp_path):
    """Copy of the bundled fixture with output redirected into tmp_path."""
    data = tmp_path / "data"
    shutil.copytree(fixture_dir(), data)
    ini = data / "fixture.ini"
    text = ini.read_text()
    ini.write_text(text.replace("dir = runs", f"dir = {tmp_path / 'runs'}"))
    return ini


ACCEPTANCE = {}


def record_criterion(number, passed, detail):
    ACCEPTANCE[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
