import os

import pytest
from hypothesis import HealthCheck, settings

from negabase.number_field import BaseSpec

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def golden():
    return BaseSpec.parse("x^2-x-1")


@pytest.fixture(scope="session")
def plastic():
    return BaseSpec.parse("x^3-x-1")


@pytest.fixture(scope="session")
def silver():
    return BaseSpec.parse("x^2-2*x-1")


@pytest.fixture(scope="session")
def two():
    return BaseSpec.parse("2")


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("NEGABASE_CACHE_DIR", str(tmp_path / "cache"))
