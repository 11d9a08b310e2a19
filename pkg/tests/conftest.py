import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ecblind.codec import registry_lookup  # noqa: E402


@pytest.fixture(scope="session")
def toy():
    return registry_lookup("toy17")


@pytest.fixture(scope="session")
def std():
    return registry_lookup("secp160r1")


@pytest.fixture(params=["secp160r1", "secp256k1", "p256"], scope="session")
def standard_curve(request):
    return registry_lookup(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
