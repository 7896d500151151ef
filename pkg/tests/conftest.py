import sys

import pytest

from zdbkit.cyclotomy import build_cosets
from zdbkit.field import build_field

GF27_MODULUS = [1, 2, 0, 1]  # x^3 + 2x + 1
GF729_MODULUS = [2, 2, 1, 0, 2, 0, 1]  # x^6 + 2x^4 + x^2 + 2x + 2


@pytest.fixture(scope="session")
def gf27():
    return build_field(3, 3, 1, GF27_MODULUS)


@pytest.fixture(scope="session")
def gf729():
    """GF(3^6) viewed over GF(9)."""
    return build_field(3, 6, 2, GF729_MODULUS)


@pytest.fixture(scope="session")
def gf729_over_3():
    return build_field(3, 6, 1, GF729_MODULUS)


@pytest.fixture(scope="session")
def gf256_over_4():
    return build_field(2, 8, 2)


@pytest.fixture(scope="session")
def cos729(gf729):
    return build_cosets(gf729, 4, 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
