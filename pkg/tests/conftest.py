import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def sl2_loop():
    from multiloop.presets import multiloop_preset
    return multiloop_preset("sl2-loop")


@pytest.fixture(scope="session")
def sl2_loop2():
    from multiloop.presets import multiloop_preset
    return multiloop_preset("sl2-loop2")


@pytest.fixture(scope="session")
def a2_twisted():
    from multiloop.presets import multiloop_preset
    return multiloop_preset("a2-twisted")


@pytest.fixture(scope="session")
def sl2_inner():
    from multiloop.presets import multiloop_preset
    return multiloop_preset("sl2-inner")
