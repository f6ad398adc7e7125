import random
from importlib import resources

import pytest
from hypothesis import settings

from cpbribe import kernels
from cpbribe.io import load_profile

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    previous = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def vacation_path():
    return str(resources.files("cpbribe") / "data" / "vacation.json")


@pytest.fixture
def vacation(vacation_path):
    profile, _ = load_profile(vacation_path)
    return profile


@pytest.fixture
def rng():
    return random.Random(20261016)


_CRITERIA = pytest.StashKey[dict]()


def record_criterion(request, number, ok, detail):
    """Remember one acceptance verdict for the terminal summary."""
    request.config.stash.setdefault(_CRITERIA, {})[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
