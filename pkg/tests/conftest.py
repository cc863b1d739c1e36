"""Shared fixtures."""

from pathlib import Path

import pytest

from src.config import TWO_PROCESS_MODEL_PATH
from src.model_io import load_model_file


@pytest.fixture
def model_path():
    return TWO_PROCESS_MODEL_PATH


@pytest.fixture
def model_bytes():
    return Path(TWO_PROCESS_MODEL_PATH).read_bytes()


@pytest.fixture(scope='session')
def two_process():
    """Two processes setting x and y: states q0 (neither) .. q3 (both)."""
    return load_model_file(TWO_PROCESS_MODEL_PATH)


@pytest.fixture
def ids(two_process):
    """State names of the two-process model to a set of state ids."""
    return lambda *names: frozenset(two_process.state_id(n) for n in names)
