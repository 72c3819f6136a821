"""
Tests for environment-driven settings.
"""

import pytest

from flagpave.config import get_settings, reset_settings
from flagpave.errors import ConfigurationError


class TestSettings:
    def test_defaults(self):
        settings = get_settings()
        assert settings.max_nodes == 2_000_000
        assert settings.primes == [2, 3]
        assert settings.workers == 1

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("QP_MAX_NODES", "1000")
        monkeypatch.setenv("QP_PRIMES", "2, 5,7")
        monkeypatch.setenv("QP_LOG_LEVEL", "debug")
        reset_settings()
        settings = get_settings()
        assert settings.max_nodes == 1000
        assert settings.primes == [2, 5, 7]
        assert settings.log_level == "DEBUG"

    def test_cached_until_reset(self, monkeypatch):
        first = get_settings()
        monkeypatch.setenv("QP_SEED", "7")
        assert get_settings() is first
        reset_settings()
        assert get_settings().seed == 7

    @pytest.mark.parametrize("name,value", [
        ("QP_MAX_NODES", "many"), ("QP_MAX_NODES", "0"), ("QP_WORKERS", "-2"), ("QP_PRIMES", "2,three"),
    ])
    def test_bad_values(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        reset_settings()
        with pytest.raises(ConfigurationError):
            get_settings()
