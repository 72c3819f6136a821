"""
Shared pytest setup: source path, environment, and the slow marker.
"""

import os
import sys

import pytest
from dotenv import load_dotenv

load_dotenv()

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(project_root, "flagpave", "src"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive enumeration over F_p")


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings, whatever the shell exports."""
    from flagpave.config import reset_settings

    for name in ("QP_MAX_NODES", "QP_PRIMES", "QP_SEED", "QP_WORKERS", "QP_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def a2():
    from flagpave.formats import load_quiver

    return load_quiver("a2")


@pytest.fixture
def a3():
    from flagpave.formats import load_quiver

    return load_quiver("a3")


@pytest.fixture
def d4():
    from flagpave.formats import load_quiver

    return load_quiver("d4")


@pytest.fixture
def e6():
    from flagpave.formats import load_quiver

    return load_quiver("e6_ar")


@pytest.fixture
def e7():
    from flagpave.formats import load_quiver

    return load_quiver("e7_alt")
