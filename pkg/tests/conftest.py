import pytest

from acceptance_log import LINES


def pytest_terminal_summary(terminalreporter):
    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in LINES:
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _quiet_engine_warnings(caplog):
    caplog.set_level("ERROR", logger="chabauty.engine")
    yield
