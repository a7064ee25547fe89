from __future__ import annotations

import os
import sys
from collections.abc import Generator
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from harmonia import constructions  # noqa: E402
from harmonia.complex import Filtration  # noqa: E402

HARMONIA_ENV = ("HARMONIA_THREADS", "HARMONIA_BACKEND", "HARMONIA_LOG_LEVEL")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    for name in HARMONIA_ENV:
        monkeypatch.delenv(name, raising=False)
    yield
    # load_dotenv writes straight into os.environ.
    for name in HARMONIA_ENV:
        os.environ.pop(name, None)


@pytest.fixture
def filled_triangle() -> Filtration:
    return constructions.filled_triangle()


@pytest.fixture
def hollow_triangle() -> Filtration:
    return constructions.hollow_triangle()


@pytest.fixture
def repair_square() -> Filtration:
    return constructions.repair_square()


@pytest.fixture
def example_one_book() -> Filtration:
    return constructions.example_one_book()
