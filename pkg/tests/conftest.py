from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _no_cache_dir(monkeypatch):
    # graded pieces are recomputed unless a test opts in to the cache
    monkeypatch.delenv("SYZYGY_CACHE_DIR", raising=False)
