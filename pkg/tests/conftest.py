import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wellsum.specfun import PrecisionContext  # noqa: E402


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(320)


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionContext(128)
