from pathlib import Path

import pytest

from algebra.oscillator import build_pair, resolve_params

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def params():
    """ε = (1, 3, 3), so (ε̃1, ε̃2, ε̃3) = (-1, 1, 1)"""
    return resolve_params(1, 3, 3)


@pytest.fixture
def oscillator(params):
    return build_pair(params)


@pytest.fixture
def data_dir():
    return DATA_DIR
