import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from greedylab.catalog import full_catalog  # noqa: E402

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def catalog():
    return full_catalog()


@pytest.fixture(scope="session")
def basis_of(catalog):
    return lambda ident: catalog[ident].basis()


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GREEDYLAB_CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
