import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kbdebug.dpi import parse_dpi
from kbdebug.probability import parse_element_probs

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def table2_text() -> str:
    return (FIXTURES / "table2.dpi").read_text()


@pytest.fixture()
def table2(table2_text):
    return parse_dpi(table2_text)


@pytest.fixture(scope="session")
def table2_elem_probs():
    return parse_element_probs((FIXTURES / "table2.probs").read_text())
