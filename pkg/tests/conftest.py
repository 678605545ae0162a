import sys
from pathlib import Path

import pytest

# Test-only helper modules (fswgen, corpusgen) live next to the tests.
sys.path.insert(0, str(Path(__file__).parent))

# ASL "Hello": one M-boxed sign with two symbols.
HELLO_FSW = "M518x529S14c20481x471S27106503x489"
HELLO_TOKENS = "M p518 p529 S14c c2 r0 p481 p471 S271 c0 r6 p503 p489".split()

# A movement symbol written as a question mark; entries that are only this
# sign carry no translatable content.
QUESTION_MARK_FSW = "M510x517S29f0c491x484"


@pytest.fixture
def hello_fsw() -> str:
    return HELLO_FSW


@pytest.fixture
def hello_tokens() -> list[str]:
    return list(HELLO_TOKENS)
