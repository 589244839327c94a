import pytest

from oamlink.experiments import table1_scenario


@pytest.fixture
def reference():
    """Reference link configuration, perfectly aligned."""
    return table1_scenario()


@pytest.fixture
def tilted():
    """Reference link at 5 degrees on both oblique angles."""
    return table1_scenario(alpha_deg=5, gamma_deg=5)
