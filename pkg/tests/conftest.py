import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cvtopo.topo import ClusterSystem, SurfaceCodeSystem

settings.register_profile("cvtopo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("cvtopo")


@functools.lru_cache(maxsize=None)
def surface_system(log_s: float) -> SurfaceCodeSystem:
    return SurfaceCodeSystem(float(np.exp(log_s)))


@functools.lru_cache(maxsize=None)
def cluster_system(log_s: float) -> ClusterSystem:
    return ClusterSystem(float(np.exp(log_s)))


@pytest.fixture(scope="session")
def surface():
    return surface_system


@pytest.fixture(scope="session")
def cluster():
    return cluster_system
