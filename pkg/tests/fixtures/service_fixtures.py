import pytest

from app.models.series import TruncationPolicy
from app.services.c_function_service import CFunctionService
from app.services.dunkl_service import DunklService
from app.services.hypergeometric_service import HypergeometricService
from app.services.jacobi_service import JacobiService
from app.services.matching_service import MatchingService
from app.services.series_service import SeriesService
from app.services.transform_service import TransformService


def _build_policy_data(settings, overrides: dict | None = None) -> dict:
    base_data = {
        "max_height": settings.series_max_height,
        "tail_tol": settings.tail_tol,
        "wall_margin": settings.wall_margin,
        "resonance_tol": settings.resonance_tol,
        "height_limit": settings.series_height_limit,
        "precision_tol": settings.precision_tol,
    }
    if overrides:
        base_data.update(overrides)
    return base_data


@pytest.fixture(scope="function")
def policy_factory(settings):
    """Factory for truncation policies starting from the settings defaults."""

    def _create_policy(**overrides):
        return TruncationPolicy(**_build_policy_data(settings, overrides))

    return _create_policy


@pytest.fixture(scope="function")
def policy(policy_factory):
    return policy_factory()


@pytest.fixture(scope="function")
def series_service(settings, root_service):
    return SeriesService(settings, root_service=root_service)


@pytest.fixture(scope="function")
def c_function_service(settings, root_service):
    return CFunctionService(settings, root_service=root_service)


@pytest.fixture(scope="function")
def hypergeometric_service(settings, root_service, series_service, c_function_service):
    return HypergeometricService(
        settings,
        series_service=series_service,
        c_function_service=c_function_service,
        root_service=root_service,
    )


@pytest.fixture(scope="function")
def jacobi_service(settings):
    return JacobiService(settings)


@pytest.fixture(scope="function")
def dunkl_service(settings, root_service):
    return DunklService(settings, root_service=root_service)


@pytest.fixture(scope="function")
def matching_service(settings, root_service):
    return MatchingService(settings, root_service=root_service)


@pytest.fixture(scope="function")
def transform_service(
    settings, root_service, c_function_service, hypergeometric_service, jacobi_service
):
    return TransformService(
        settings,
        root_service=root_service,
        c_function_service=c_function_service,
        hypergeometric_service=hypergeometric_service,
        jacobi_service=jacobi_service,
    )
