"""Shared pytest configuration for OArrays tests."""
import os
import sys

import pytest

# Add project root to sys.path so 'from resources.lib...' imports work
_PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if _PROJECT_ROOT not in sys.path:
    sys.path.insert(0, _PROJECT_ROOT)


@pytest.fixture(autouse=True, scope="session")
def reset_logger():
    """Reset StructuredLogger between test sessions to prevent cross-test pollution."""
    from resources.lib.utils import StructuredLogger
    StructuredLogger._initialized = False
    yield
    StructuredLogger.shutdown()


@pytest.fixture
def twelve_run_text():
    """The 3x12 strength-2 array on 3x2x2 levels, in the array text format."""
    return (
        "3 12\n"
        "Z3 Z2 Z2\n"
        "0 0 1 1 2 2 0 0 1 1 2 2\n"
        "0 0 0 0 0 0 1 1 1 1 1 1\n"
        "0 0 0 1 1 1 1 1 0 1 0 0\n"
    )


@pytest.fixture
def twelve_run_array(twelve_run_text):
    from resources.lib.data.array_format import parse_array
    return parse_array(twelve_run_text)
