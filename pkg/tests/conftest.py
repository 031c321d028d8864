import pytest

from dendrolab.mapcore import default_map
from dendrolab.scales import build_scale_table


@pytest.fixture(scope="session")
def fmap():
    return default_map()


@pytest.fixture(scope="session")
def table(fmap):
    return fmap.table


@pytest.fixture(scope="session")
def symbolic_table():
    # scale 3 stays symbolic under a 1000-digit cap
    return build_scale_table(3, digit_cap=1000)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
