import numpy as np
import pytest

from cvtopo.errors import StructuralError, UnphysicalError, ValidationError
from cvtopo.symplectic import (
    apply_symplectic,
    complement,
    coupled_oscillators,
    direct_sum,
    entropy,
    is_block_form,
    is_symplectic,
    log_negativity,
    log_negativity_pure,
    mutual_information,
    omega,
    random_symplectic,
    reduce,
    region_entropy,
    symplectic_spectrum,
    validate_covariance,
)


def two_mode_squeezed(r: float) -> np.ndarray:
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    q = np.array([[c, s], [s, c]])
    p = np.array([[c, -s], [-s, c]])
    return np.block([[q, np.zeros((2, 2))], [np.zeros((2, 2)), p]])


def test_omega_layout():
    om = omega(2)
    assert om[0, 2] == 1 and om[2, 0] == -1
    assert np.allclose(om @ om, -np.eye(4))


def test_vacuum_spectrum_and_entropy():
    spec = symplectic_spectrum(0.5 * np.eye(6))
    assert np.allclose(spec.values, 0.5)
    assert entropy(spec) == 0.0


def test_thermal_single_mode_entropy():
    # sigma = 1: (3/2) log2(3/2) - (1/2) log2(1/2)
    expected = 1.5 * np.log2(1.5) + 0.5
    assert entropy([1.0]) == pytest.approx(expected, abs=1e-14)


def test_two_mode_squeezed_reduced_spectrum():
    r = 0.7
    g = two_mode_squeezed(r)
    sig = symplectic_spectrum(reduce(g, [0])).values
    assert sig[0] == pytest.approx(np.cosh(2 * r) / 2, rel=1e-12)
    assert region_entropy(g, [0]) == pytest.approx(region_entropy(g, [1]), abs=1e-12)


def test_log_negativity_two_mode_squeezed():
    r = 0.4
    ln = log_negativity(two_mode_squeezed(r), [0])
    assert ln == pytest.approx(2 * r / np.log(2), rel=1e-10)
    assert log_negativity_pure([np.cosh(2 * r) / 2]) == pytest.approx(ln, rel=1e-10)


def test_log_negativity_rejects_cross_block():
    g = apply_symplectic(two_mode_squeezed(0.3), random_symplectic(2, 1))
    assert not is_block_form(g)
    with pytest.raises(ValidationError):
        log_negativity(g, [0])


def test_mutual_information_pure_is_twice_entropy():
    g = two_mode_squeezed(0.5)
    assert mutual_information(g, [0]) == pytest.approx(2 * region_entropy(g, [0]), abs=1e-12)


def test_validation_flags_unphysical():
    bad = 0.4 * np.eye(2)
    assert not validate_covariance(bad).ok
    with pytest.raises(UnphysicalError):
        entropy([0.3])


def test_odd_dimension_is_structural_error():
    with pytest.raises(StructuralError):
        symplectic_spectrum(np.eye(3))


def test_random_symplectic_is_symplectic():
    for n in (1, 2, 4):
        assert is_symplectic(random_symplectic(n, n))


def test_apply_rejects_non_symplectic():
    with pytest.raises(ValidationError):
        apply_symplectic(0.5 * np.eye(4), 2 * np.eye(4))


def test_direct_sum_layout():
    a, b = two_mode_squeezed(0.2), 0.5 * np.eye(2)
    g = direct_sum(a, b)
    assert g.shape == (6, 6)
    assert np.allclose(reduce(g, [0, 1]), a)


def test_complement():
    assert list(complement([0, 3], 5)) == [1, 2, 4]


def test_coupled_oscillators_is_pure():
    g = coupled_oscillators(1.0, 1.0, 0.3)
    assert np.allclose(symplectic_spectrum(g).values, 0.5)
    alpha = np.sqrt(1 + 4 * 0.3)
    sig = symplectic_spectrum(reduce(g, [0])).values[0]
    assert sig == pytest.approx((1 + alpha) / (4 * np.sqrt(alpha)), rel=1e-12)


def test_shear_path_keeps_graph_states_pure():
    # a graph state with a real part: the cross block is U^-1 V
    from cvtopo import graph as gc
    z = np.array([[1 + 2j, 0.5], [0.5, -0.3 + 1j]])
    g = gc.graph_to_covariance(gc.GraphState(z))
    assert np.abs(symplectic_spectrum(g).values - 0.5).max() < 1e-13


def test_entropy_is_accurate_at_large_sigma():
    # h(sigma) ~ log2(e sigma) for large sigma
    sig = 1e9
    assert entropy([sig]) == pytest.approx(np.log2(np.e * sig), rel=1e-15, abs=1e-12)
