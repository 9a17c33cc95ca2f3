import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plaitnest import builtin_system  # noqa: E402

SCHEMA_DIR = (Path(__file__).parent.parent
              / "src" / "plaitnest" / "schemas")


@pytest.fixture(scope="session")
def nesting_system():
    # max_stage 7 so stabilization at n = 6 can compare against stage 7
    return builtin_system("nesting", max_stage=7)


@pytest.fixture(scope="session")
def plaiting_system():
    return builtin_system("plaiting", max_stage=7)


@pytest.fixture(scope="session")
def schemas():
    out = {}
    for path in SCHEMA_DIR.glob("*.schema.json"):
        out[path.name.split(".")[0]] = json.loads(path.read_text())
    return out
