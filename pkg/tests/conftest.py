import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bkcheck.cube import Event  # noqa: E402


@pytest.fixture
def ev():
    """Build an explicit event from bitstrings: ev(n, "10", "11")."""

    def make(n, *members):
        return Event.explicit(n, members)

    return make
