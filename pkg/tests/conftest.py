"""
Common test fixtures and configuration for the test suite.
"""

import json
from unittest.mock import patch

import pytest

from expressions import parse_rational, parse_rational_t
from sampling import Sampler
from settings import settings


@pytest.fixture
def rx():
    """Parse text into an element of Q(t)(x)."""
    return parse_rational


@pytest.fixture
def rt():
    """Parse text into an element of Q(t)."""
    return parse_rational_t


@pytest.fixture
def sampler():
    """Seeded random input generator."""
    return Sampler(settings.random_seed)


@pytest.fixture
def mock_settings():
    """Settings with certificate re-verification on, a 64-column system limit and compact JSON."""
    with patch.object(settings, "verify_on_emit", True), patch.object(
        settings, "max_system_columns", 64
    ), patch.object(settings, "json_indent", 0):
        yield settings


@pytest.fixture
def write_problem(tmp_path):
    """Write a problem dict as JSON and return its path."""

    def _write(data, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
