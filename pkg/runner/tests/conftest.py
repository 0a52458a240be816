import sys

import pytest


@pytest.fixture(scope="session")
def runner_cmd():
    return [sys.executable, "-m", "wscp_runner"]
