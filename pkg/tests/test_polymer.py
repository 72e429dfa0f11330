import numpy as np
import pytest

from cvtopo.errors import NumericalAssertionError, ValidationError
from cvtopo.polymer import (
    OscillatorPairConfig,
    convergence_exponent,
    convergence_sweep,
    entropy_correction_closed,
    pair_covariance,
    pair_entropy,
    pair_symplectic_eigenvalues,
    polymer_moments_closed,
    polymer_moments_series,
    series_cutoff,
    sigma_polymer_closed,
    sigma_schrodinger,
)
from cvtopo.symplectic import coupled_oscillators, entropy


def test_schrodinger_limit():
    m = polymer_moments_series(1.3, 0.0)
    assert m.x_var == pytest.approx(1.3**2 / 2)
    assert m.uncertainty_product == pytest.approx(0.25)


@pytest.mark.parametrize("r", [0.02, 0.05, 0.1])
def test_x_variance_series_vs_closed(r):
    d = 1.0
    a, b = polymer_moments_series(d, r * d), polymer_moments_closed(d, r * d)
    assert a.x_var == pytest.approx(b.x_var, rel=1e-6)


@pytest.mark.parametrize("r", [0.02, 0.05, 0.1])
def test_p_variance_series_vs_closed_to_next_order(r):
    # the closed form stops at O(r^2); the next term is r^4 / 6 relative
    a, b = polymer_moments_series(1.0, r), polymer_moments_closed(1.0, r)
    assert abs(a.p_var / b.p_var - 1) == pytest.approx(r**4 / 6, rel=0.05)


def test_xp_symmetric_moment_vanishes():
    assert abs(polymer_moments_series(1.0, 0.07).xp_sym) < 1e-14


def test_cutoff_and_tail_check():
    n = series_cutoff(1.0, 0.1)
    assert np.exp(-(n * 0.1) ** 2) < 1e-16
    with pytest.raises(NumericalAssertionError):
        polymer_moments_series(1.0, 0.1, n_max=5)


def test_config_validation():
    with pytest.raises(ValidationError):
        OscillatorPairConfig(lam=-1.0)
    with pytest.raises(ValidationError):
        OscillatorPairConfig.from_alpha(2.0, 0.25)
    cfg = OscillatorPairConfig.from_alpha(1.5, 0.05)
    assert cfg.alpha == pytest.approx(1.5)
    assert cfg.within_coupling_bound
    assert not OscillatorPairConfig.from_alpha(2.0).within_coupling_bound
    assert cfg.with_mu_over_d(0.15).coarse


def test_pair_covariance_at_mu_zero_matches_ground_state():
    cfg = OscillatorPairConfig(1.0, 1.3, 0.4, 0.0)
    g = pair_covariance(cfg)
    assert np.allclose(g, coupled_oscillators(1.0, 1.3, 0.4))


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_eigenvalue_routes(alpha):
    cfg = OscillatorPairConfig.from_alpha(alpha, 0.08)
    s0, s1 = pair_symplectic_eigenvalues(cfg)
    assert s0 == pytest.approx(sigma_schrodinger(alpha))
    assert s1 == pytest.approx(sigma_polymer_closed(alpha, 0.08), abs=(alpha**2 + 1) * 0.08**4)


def test_uncertainty_product_drops_with_mu():
    # p_mu is a finite difference, so x^2 p_mu^2 = (1/4)(1 - r^2 / 2) to leading order
    for r in (0.02, 0.05, 0.1):
        m = polymer_moments_series(1.0, r)
        assert m.uncertainty_product == pytest.approx(0.25 * (1 - r**2 / 2), abs=r**4)


def test_entropy_correction_matches_derivative():
    # dS/dsigma = log2((sigma + 1/2) / (sigma - 1/2)) at sigma_schr
    alpha, r = 2.0, 1e-3
    sig = sigma_schrodinger(alpha)
    slope = np.log2((sig + 0.5) / (sig - 0.5))
    dsig = sigma_polymer_closed(alpha, r) - sig
    assert entropy_correction_closed(alpha, r) == pytest.approx(slope * dsig, rel=1e-12)
    assert entropy_correction_closed(1.0, r) == 0.0


def test_sweep_and_exponent():
    cfg = OscillatorPairConfig.from_alpha(2.0)
    rows = convergence_sweep(cfg, [0.01, 0.02, 0.04, 0.08])
    assert all(row[2] <= row[1] for row in rows)
    assert convergence_exponent(rows) == pytest.approx(2.0, abs=0.02)
    with pytest.raises(ValidationError):
        convergence_exponent(rows[:1])


def test_pair_entropy_delta_sign():
    res = pair_entropy(OscillatorPairConfig.from_alpha(2.0, 0.05))
    assert res.delta < 0 and res.closed_correction < 0
    assert res.s_schr == pytest.approx(entropy([sigma_schrodinger(2.0)]))
