from __future__ import annotations

import pytest

from k3verify.registry import load_default


@pytest.fixture(scope="session")
def registry():
    return load_default()
