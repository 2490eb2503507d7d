"""
Pytest configuration file

Provides fixtures and configuration for the test suite.
"""
import pytest
import sys
from pathlib import Path

import numpy as np

# Add src to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.channels.channel import tensor_power
from src.channels.library import amplitude_damping


def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )


@pytest.fixture
def rng():
    """Seeded generator, fresh for every test"""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def ad6():
    """Amplitude damping with gamma 0.004 on six qubits"""
    return tensor_power(amplitude_damping(0.004), 6)


@pytest.fixture(scope="session")
def ad2():
    """Amplitude damping with gamma 0.1 on two qubits"""
    return tensor_power(amplitude_damping(0.1), 2)
