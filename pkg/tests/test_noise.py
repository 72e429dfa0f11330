import numpy as np
import pytest

from cvtopo import graph as gc
from cvtopo.errors import NumericalAssertionError, ValidationError
from cvtopo.lattice import ModeLattice
from cvtopo.noise import kappa, measure_covariance, measure_pattern, mixed_surface_code


def test_kappa_limits():
    assert kappa(100.0, 1.0) == 1.0
    assert kappa(1.0, 1.0) == pytest.approx(1 / np.tanh(1.0))
    assert kappa(1e-3, 1.0) > 900
    with pytest.raises(ValidationError):
        kappa(0.0, 1.0)


@pytest.mark.parametrize("basis", ["Q", "P"])
def test_measurement_matches_graph_route(basis):
    g = gc.vacua_graph(4)
    for j in range(4):
        g = gc.squeeze(g, j, 1.4)
    for j, k in ((0, 1), (1, 2), (2, 3), (0, 3)):
        g = gc.controlled_z(g, j, k)
    after = gc.measure_q(g, 1) if basis == "Q" else gc.measure_p(g, 1)
    got = measure_covariance(gc.graph_to_covariance(g), 1, basis)
    assert np.abs(got - gc.graph_to_covariance(after)).max() < 1e-12


def test_measure_pattern_labels():
    gamma = 0.5 * np.eye(6)
    out, labels = measure_pattern(gamma, [(2, "Q"), (0, "P")])
    assert out.shape == (2, 2) and list(labels) == [1]


def test_zero_variance_rejected():
    gamma = np.diag([0.0, 1.0, 1.0, 1.0])
    with pytest.raises(NumericalAssertionError):
        measure_covariance(gamma, 0, "Q")


@pytest.mark.parametrize("k", [1.0, 2.5, 1e4])
def test_mixed_surface_code_scales(k):
    mixed = mixed_surface_code(ModeLattice(5, 5), 1.3, k)
    assert mixed.shape == (24, 24)


def test_kappa_below_one_rejected():
    with pytest.raises(ValidationError):
        mixed_surface_code(ModeLattice(3, 3), 1.0, 0.5)
