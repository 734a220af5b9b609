import os
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# every test session starts from an empty on-disk catalog
os.environ["SMA_CATALOG_DIR"] = tempfile.mkdtemp(prefix="sma-catalog-")

from signed_magic.core import SignedGrid  # noqa: E402


@pytest.fixture
def grid_of():
    return SignedGrid.from_rows


@pytest.fixture
def fresh_catalog(tmp_path, monkeypatch):
    from signed_magic import providers

    monkeypatch.setenv("SMA_CATALOG_DIR", str(tmp_path))
    providers.clear_caches()
    yield tmp_path
    providers.clear_caches()


def pytest_terminal_summary(terminalreporter):
    from report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
