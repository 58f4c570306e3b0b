import logging
import os
from typing import Generator

import hypothesis
import pytest

from a2nchain.config import Settings, System

root_logger = logging.getLogger()
root_logger.setLevel(logging.DEBUG)  # This will only run when testing

logger = logging.getLogger(__name__)

hypothesis.settings.register_profile(
    "dev",
    deadline=45000,
    max_examples=25,
    suppress_health_check=[
        hypothesis.HealthCheck.data_too_large,
        hypothesis.HealthCheck.too_slow,
        hypothesis.HealthCheck.function_scoped_fixture,
    ],
)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

SLOW_TESTS = os.getenv("A2NCHAIN_SLOW_TESTS") == "1"


def skip_if_not_slow() -> pytest.MarkDecorator:
    return pytest.mark.skipif(
        not SLOW_TESTS,
        reason="Sweeps over n=3 or N=3 chains; set A2NCHAIN_SLOW_TESTS=1",
    )


@pytest.fixture
def settings() -> Settings:
    return Settings(allow_reset=True, worker_threads=2)


@pytest.fixture
def system(settings: Settings) -> Generator[System, None, None]:
    system = System(settings)
    yield system
    system.stop()
