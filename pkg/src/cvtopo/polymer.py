"""Polymer-quantized moments and the entanglement of two coupled oscillators.

The shadow of the oscillator ground state on the lattice x_n = n mu carries
coefficients exp(-n^2 mu^2 / (2 d^2)).  Moments come either from direct
lattice sums (the series route) or from the leading-order closed forms.
Polymer corrections act on the normal modes, each with its own length scale;
the coupled covariance is rebuilt afterwards with the rotation Y.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Literal

import numpy as np

from .errors import NumericalAssertionError, UnphysicalError, ValidationError
from .symplectic import TAU_PSD, entropy, reduce

MU_MAX = 0.2
MU_WARN = 0.1
SERIES_EPS = 1e-16

Source = Literal["series", "closed_form"]

# (q1, q2, p1, p2) -> normal coordinates
Y_NORMAL = np.array([[1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, 1]]) / np.sqrt(2.0)


@dataclass(frozen=True)
class OscillatorPairConfig:
    """Two oscillators of mass m and frequency omega coupled by lam (x1 - x2)^2."""

    m: float = 1.0
    omega: float = 1.0
    lam: float = 0.0
    mu: float = 0.0

    def __post_init__(self) -> None:
        if self.m <= 0 or self.omega <= 0:
            raise ValidationError("mass and frequency must be positive")
        if self.lam < 0:
            raise ValidationError("coupling must be non-negative")
        if self.mu < 0:
            raise ValidationError("lattice spacing must be non-negative")
        # the stiffer normal mode has scale d / sqrt(alpha)
        if self.mu_over_d * np.sqrt(self.alpha) >= MU_MAX:
            raise ValidationError(
                f"mu/d = {self.mu_over_d:.3g} puts the stiff mode outside the mu/d < {MU_MAX} regime")

    @classmethod
    def from_alpha(cls, alpha: float, mu_over_d: float = 0.0, m: float = 1.0,
                   omega: float = 1.0) -> "OscillatorPairConfig":
        if alpha < 1:
            raise ValidationError("alpha must be at least 1")
        d = (m * omega) ** -0.5
        return cls(m, omega, (alpha**2 - 1) * m * omega**2 / 4, mu_over_d * d)

    @property
    def d(self) -> float:
        return (self.m * self.omega) ** -0.5

    @property
    def alpha(self) -> float:
        return float(np.sqrt(1 + 4 * self.lam / (self.m * self.omega**2)))

    @property
    def mu_over_d(self) -> float:
        return self.mu / self.d

    @property
    def coarse(self) -> bool:
        """True above mu/d = 0.1, where the leading-order forms degrade."""
        return self.mu_over_d > MU_WARN

    @property
    def within_coupling_bound(self) -> bool:
        """Whether lam < m omega^2 / 2 (alpha < sqrt 3)."""
        return self.lam < self.m * self.omega**2 / 2

    def with_mu_over_d(self, r: float) -> "OscillatorPairConfig":
        return replace(self, mu=r * self.d)


@dataclass(frozen=True)
class PolymerMoments:
    x_var: float
    p_var: float
    xp_sym: float
    source: Source
    v_mu: float = float("nan")
    kinetic: float = float("nan")

    @property
    def uncertainty_product(self) -> float:
        return self.x_var * self.p_var


def _check_scale(d: float, mu: float) -> None:
    if d <= 0:
        raise ValidationError("oscillator scale must be positive")
    if mu < 0 or mu / d >= MU_MAX:
        raise ValidationError(f"need 0 <= mu/d < {MU_MAX}")


def series_cutoff(d: float, mu: float) -> int:
    """Smallest N with exp(-N^2 mu^2 / d^2) < 1e-16."""
    return int(np.ceil(d / mu * np.sqrt(-np.log(SERIES_EPS)))) + 1


def polymer_moments_series(d: float, mu: float, n_max: int | None = None) -> PolymerMoments:
    """Ground-state moments from direct sums over the shadow coefficients."""
    _check_scale(d, mu)
    if mu == 0:
        return PolymerMoments(d**2 / 2, 1 / (2 * d**2), 0.0, "series", 1.0, 1 / (2 * d**2))
    n_max = series_cutoff(d, mu) if n_max is None else int(n_max)
    tail = np.exp(-(n_max * mu / d) ** 2)
    if tail >= SERIES_EPS:
        raise NumericalAssertionError(f"cutoff {n_max} leaves a tail of {tail:.2e}")
    n = np.arange(-n_max, n_max + 1)
    x = n * mu
    c = np.exp(-(x**2) / (2 * d**2))
    norm = c @ c

    def one_minus_shift(k: int) -> float:
        # 1 - <V(k mu)> as a sum of squares, which avoids cancellation at small mu
        pad = np.zeros(k)
        diff = np.concatenate([c, pad]) - np.concatenate([pad, c])
        return float(0.5 * (diff @ diff) / norm)

    def p_apply(vec: np.ndarray) -> np.ndarray:
        # p_mu = (V(mu) - V(-mu)) / (2 i mu); returned without the 1/i
        out = np.zeros_like(vec)
        out[:-1] += vec[1:]
        out[1:] -= vec[:-1]
        return out / (2 * mu)

    x_var = float(c @ (x**2 * c) / norm)
    g1, g2 = one_minus_shift(1), one_minus_shift(2)
    p_var = 2 * g2 / (4 * mu**2)
    kinetic = 2 * g1 / mu**2
    # <x p + p x> = (1/i)[c.(x Pc) + c.(P(xc))]; each term is odd under n -> -n
    xp = float(c @ (x * p_apply(c)) + c @ p_apply(x * c)) / norm
    return PolymerMoments(x_var, float(p_var), xp, "series", 1 - g1, float(kinetic))


def polymer_moments_closed(d: float, mu: float) -> PolymerMoments:
    """Leading-order moments: x^2 with its exponential correction, p_mu^2 to O(mu^2)."""
    _check_scale(d, mu)
    if mu == 0:
        return PolymerMoments(d**2 / 2, 1 / (2 * d**2), 0.0, "closed_form")
    r2 = (mu / d) ** 2
    x_var = d**2 / 2 * (1 - 4 * np.pi**2 / r2 * np.exp(-np.pi**2 / r2))
    p_var = 1 / (2 * d**2) * (1 - r2 / 2)
    return PolymerMoments(float(x_var), float(p_var), 0.0, "closed_form")


def sigma_schrodinger(alpha: float) -> float:
    return (1 + alpha) / (4 * np.sqrt(alpha))


def sigma_polymer_closed(alpha: float, mu_over_d: float) -> float:
    return sigma_schrodinger(alpha) - (1 + alpha**2) / (16 * np.sqrt(alpha)) * mu_over_d**2


def pair_covariance(cfg: OscillatorPairConfig, source: Source = "series") -> np.ndarray:
    """Coupled covariance Y^-1 Gamma'_mu Y^-T from per-mode polymer moments.

    Normal mode 1 keeps the scale d; mode 2 (frequency omega alpha) has d / sqrt(alpha).
    """
    moments = polymer_moments_series if source == "series" else polymer_moments_closed
    scales = (cfg.d, cfg.d / np.sqrt(cfg.alpha))
    mom = [moments(dk, cfg.mu) for dk in scales]
    g_normal = np.diag([mom[0].x_var, mom[1].x_var, mom[0].p_var, mom[1].p_var])
    y_inv = Y_NORMAL.T
    return y_inv @ g_normal @ y_inv.T


def pair_symplectic_eigenvalues(cfg: OscillatorPairConfig, source: Source = "series",
                                tol: float | None = None) -> tuple[float, float]:
    """(sigma_1 Schrodinger, sigma_1 polymer), the latter from the rebuilt covariance.

    The numerical value is checked against the leading-order closed form to
    within a multiple of (mu/d)^4.
    """
    sigma0 = sigma_schrodinger(cfg.alpha)
    g1 = reduce(pair_covariance(cfg, source), [0])
    if abs(g1[0, 1]) > 1e-12 * np.abs(g1).max():
        raise NumericalAssertionError("reduced covariance acquired an x-p correlation")
    sigma = float(np.sqrt(g1[0, 0] * g1[1, 1]))
    closed = sigma_polymer_closed(cfg.alpha, cfg.mu_over_d)
    tol = (cfg.alpha**2 + 1) * cfg.mu_over_d**4 + 1e-12 if tol is None else tol
    if abs(sigma - closed) > tol:
        raise NumericalAssertionError(
            f"polymer eigenvalue routes disagree: {sigma:.12g} vs {closed:.12g}")
    return float(sigma0), sigma


def entropy_correction_closed(alpha: float, mu_over_d: float) -> float:
    """First-order entropy shift dS/dsigma * dsigma with dsigma the closed-form drop."""
    if alpha <= 1:
        return 0.0
    ratio = (1 + np.sqrt(alpha)) ** 2 / (1 - np.sqrt(alpha)) ** 2
    return float(-(1 + alpha**2) / (16 * np.sqrt(alpha)) * np.log2(ratio) * mu_over_d**2)


@dataclass(frozen=True)
class PairEntropy:
    s_schr: float
    s_poly: float
    sigma_schr: float
    sigma_poly: float
    closed_correction: float

    @property
    def delta(self) -> float:
        return self.s_poly - self.s_schr


def pair_entropy(cfg: OscillatorPairConfig, source: Source = "series") -> PairEntropy:
    sigma0, sigma = pair_symplectic_eigenvalues(cfg, source)
    if sigma < 0.5 - TAU_PSD:
        raise UnphysicalError(
            f"polymer eigenvalue {sigma:.6g} < 1/2: the shadow state is not Gaussian here")
    return PairEntropy(entropy([sigma0]), entropy([max(sigma, 0.5)]), sigma0, sigma,
                       entropy_correction_closed(cfg.alpha, cfg.mu_over_d))


SWEEP_HEADER = ("mu_over_d", "s_schr_bits", "s_poly_bits", "delta_s_numeric_bits",
                "delta_s_closed_bits")


def convergence_sweep(cfg: OscillatorPairConfig, mu_over_d: Iterable[float],
                      source: Source = "series") -> list[tuple[float, float, float, float, float]]:
    rows = []
    for r in mu_over_d:
        res = pair_entropy(cfg.with_mu_over_d(float(r)), source)
        rows.append((float(r), res.s_schr, res.s_poly, res.delta, res.closed_correction))
    return rows


def convergence_exponent(rows) -> float:
    """Slope of log|Delta S| against log(mu/d) over rows with mu > 0."""
    r = np.array([row[0] for row in rows if row[0] > 0])
    ds = np.array([abs(row[3]) for row in rows if row[0] > 0])
    if r.size < 2:
        raise ValidationError("need at least two nonzero mu values for a fit")
    return float(np.polyfit(np.log(r), np.log(ds), 1)[0])
