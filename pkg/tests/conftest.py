"""Shared fixtures: packaged datasets and fast bootstrap settings."""

from pathlib import Path

import pytest

from ranksets.boot import BootstrapConfig
from ranksets.core import MultinomialSample

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Verdict lines recorded by the acceptance tests; replayed after the
# run so they appear in the terminal output even under capture.
ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)

MELBOURNE_LABELS = (
    "Labor", "Liberal", "No party", "Greens",
    "No answer", "One Nation", "National",
)
MELBOURNE_COUNTS = (87, 75, 42, 21, 6, 2, 1)


@pytest.fixture(scope="session")
def melbourne() -> MultinomialSample:
    return MultinomialSample(counts=MELBOURNE_COUNTS, labels=MELBOURNE_LABELS)


@pytest.fixture(scope="session")
def melbourne_csv() -> Path:
    return DATA_DIR / "melbourne.csv"


@pytest.fixture(scope="session")
def territories_csv() -> Path:
    return DATA_DIR / "territories8.csv"


@pytest.fixture(scope="session")
def fast_cfg() -> BootstrapConfig:
    """Small-B config for structural tests that don't pin quantities."""
    return BootstrapConfig(B=400, seed=0)
