from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from datasheet_forge.models import Datasheet
from datasheet_forge.parser import parse

settings.register_profile(
    "ci", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("ci")

CORPUS = Path(__file__).parent / "corpus"
VALID_DIR = CORPUS / "valid"
DEFECTS_DIR = CORPUS / "defects"


def load_datasheet(path: Path) -> Datasheet:
    ds, diagnostics = parse(path.read_bytes())
    assert ds is not None, diagnostics
    return ds


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture
def full_reference() -> Datasheet:
    return load_datasheet(VALID_DIR / "full_reference.json")


@pytest.fixture
def minimal_datasheet() -> Datasheet:
    return load_datasheet(VALID_DIR / "minimal_required.json")
