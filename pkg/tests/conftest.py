import sys
from pathlib import Path

import pytest

from phantom_probe.vocab import toy_vocabulary

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def toy():
    return toy_vocabulary(normalize_whitespace=True)


@pytest.fixture(scope="session")
def toy_raw():
    return toy_vocabulary(normalize_whitespace=False)


def ids(vocab, *pieces):
    return tuple(vocab.id_of(p) for p in pieces)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
