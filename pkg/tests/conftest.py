import logging

import pytest
from faker import Faker

from app.config import get_settings
from app.utils.cache import reset_shared_cache

pytest_plugins = [
    "tests.fixtures.root_system_fixtures",
    "tests.fixtures.ktype_fixtures",
    "tests.fixtures.service_fixtures",
]

logger = logging.getLogger(__name__)


@pytest.fixture(scope="session")
def settings():
    """Application settings, read once from the test environment."""
    current = get_settings()
    logger.debug(f"Running tests in environment {current.environment!r}")
    return current


@pytest.fixture(autouse=True)
def fresh_cache():
    """Each test starts from an empty process-wide coefficient cache."""
    reset_shared_cache()
    yield
    reset_shared_cache()


@pytest.fixture(scope="function")
def faker():
    """Seeded Faker so sampled parameters are reproducible."""
    instance = Faker()
    instance.seed_instance(20240611)
    return instance
