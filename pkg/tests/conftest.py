import sys

import pytest

from toy_components import DATA_DIR


@pytest.fixture(scope="session")
def runner_cmd():
    return [sys.executable, str(DATA_DIR / "toyrunner.py")]
