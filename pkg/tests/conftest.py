import os

import pytest

from helpers import ACCEPT_KEY


def pytest_collection_modifyitems(config, items):
    # long benchmark suites only run on request
    if os.environ.get("RRTPLUS_FULL") == "1" or "slow" in (config.getoption("-m") or ""):
        return
    skip = pytest.mark.skip(reason="slow; run with -m slow or RRTPLUS_FULL=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPT_KEY, None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
