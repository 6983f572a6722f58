import pytest

from app.config import get_settings
from app.exceptions import ParameterOutOfRange
from app.models.series import TruncationPolicy


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("ENV", "TEST")
    monkeypatch.setenv("HO_MAX_HEIGHT", "12")
    monkeypatch.setenv("HO_CACHE_DIR", "/tmp/ho-cache")
    monkeypatch.setenv("HO_THREADS", "4")
    settings = get_settings()
    assert settings.is_test
    assert not settings.is_production
    assert settings.series_max_height == 12
    assert settings.cache_dir == "/tmp/ho-cache"
    assert settings.threads == 4


def test_defaults(monkeypatch):
    for name in ("ENV", "ENVIRONMENT", "HO_MAX_HEIGHT", "HO_TAIL_TOL", "HO_CACHE_DIR", "CACHE_DIR"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.series_max_height == 40
    assert settings.tail_tol == 1e-10
    assert settings.cache_dir is None


def test_precision_tolerance_reaches_the_policy(monkeypatch):
    monkeypatch.setenv("HO_PRECISION_TOL", "1e-6")
    assert get_settings().precision_tol == 1e-6
    assert TruncationPolicy.from_settings().precision_tol == 1e-6
    monkeypatch.delenv("HO_PRECISION_TOL")
    assert TruncationPolicy.from_settings().precision_tol == 1e-8


def test_precision_tolerance_must_be_positive():
    with pytest.raises(ParameterOutOfRange):
        TruncationPolicy(max_height=10, tail_tol=1e-10, wall_margin=1e-2, precision_tol=0)
