"""
BL Frame - Test Configuration

This module provides pytest fixtures for testing.
"""

import io
import os
import sys
from functools import lru_cache

import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from blframe.app import create_app
from blframe.blsystem import build_system
from blframe.cli import run_command
from blframe.config import Settings

MEMORY_CACHE = 'sqlite:///:memory:'


@lru_cache(maxsize=None)
def _cached_system(n, K=None):
    return build_system(n, K)


@pytest.fixture(scope='session')
def system():
    """Provide a factory of constructed systems shared by the whole session.

    Returns:
        callable: ``system(n, K=None)`` returning the SplineSystem of order n,
            built once per (n, K).
    """
    return _cached_system


@pytest.fixture(scope='session')
def haar(system):
    """The order-0 (Haar) system."""
    return system(0)


@pytest.fixture(scope='session')
def linear(system):
    """The order-1 (piecewise linear) system."""
    return system(1)


@pytest.fixture(scope='session')
def quadratic(system):
    """The order-2 system."""
    return system(2)


@pytest.fixture
def app():
    """Create application for testing.

    Creates the JSON service with an in-memory system cache and small
    coefficient tables so that requests stay fast.

    Yields:
        Flask: The configured Flask application instance for testing.
    """
    app = create_app({
        'TESTING': True,
        'BLFRAME_CACHE': MEMORY_CACHE,
        'BLFRAME_SETTINGS': Settings(j_max=4, cache_dir=MEMORY_CACHE),
    })
    yield app
    app.extensions['blframe_cache'].engine.dispose()


@pytest.fixture
def client(app):
    """Create a test client for the app.

    Args:
        app: The Flask application fixture.

    Returns:
        FlaskClient: A test client for making HTTP requests to the app.
    """
    return app.test_client()


@pytest.fixture
def runner():
    """Run ``blframe`` commands against an in-memory cache.

    Returns:
        callable: ``runner(*argv)`` returning (exit_code, stdout_text). A
            ``--cache-dir`` argument in argv replaces the in-memory cache.
    """
    def _run(*argv):
        argv = list(argv)
        if '--cache-dir' not in argv:
            argv += ['--cache-dir', MEMORY_CACHE]
        stdout = io.StringIO()
        code = run_command(argv, stdout=stdout)
        return code, stdout.getvalue()

    return _run
