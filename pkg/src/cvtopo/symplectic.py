"""Gaussian-state linear algebra in the (q..., p...) quadrature ordering.

Units are hbar = 1, so the vacuum covariance is I/2.  A covariance matrix is
a plain ``(2N, 2N)`` float array; helpers here validate, reduce and
diagonalize it.  Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg
from scipy.special import xlogy
from scipy.stats import unitary_group

from .errors import (
    NumericalAssertionError,
    StructuralError,
    UnphysicalError,
    UnsupportedFormError,
    ValidationError,
)

TAU_SYM = 1e-10
TAU_PSD = 1e-9
TAU_CLAMP = 1e-7
PAIRING_TOL = 1e-8
SYMPLECTIC_TOL = 1e-9
BLOCK_TOL = 1e-10
LN_VACUUM_TOL = 1e-12


def omega(n: int) -> np.ndarray:
    """Symplectic form [[0, I], [-I, 0]] for ``n`` modes."""
    if n < 1:
        raise ValidationError(f"need at least one mode, got {n}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def n_modes(gamma: np.ndarray) -> int:
    gamma = np.asarray(gamma)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise StructuralError(f"covariance must be square, got shape {gamma.shape}")
    if gamma.shape[0] % 2:
        raise StructuralError(f"covariance dimension {gamma.shape[0]} is odd")
    return gamma.shape[0] // 2


@dataclass(frozen=True)
class ValidationReport:
    modes: int
    symmetry_defect: float
    min_eigenvalue: float
    symmetric: bool
    physical: bool
    pure: bool

    @property
    def ok(self) -> bool:
        return self.symmetric and self.physical


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues sorted in descending order."""

    values: np.ndarray
    pairing_residual: float = 0.0

    def __len__(self) -> int:
        return len(self.values)


def validate_covariance(gamma: np.ndarray) -> ValidationReport:
    """Check symmetry and the uncertainty relation Gamma + i Omega / 2 >= 0."""
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes(gamma)
    scale = max(np.abs(gamma).max(), 1.0)
    defect = float(np.abs(gamma - gamma.T).max() / scale)
    sym = 0.5 * (gamma + gamma.T)
    min_eig = float(linalg.eigvalsh(sym + 0.5j * omega(n))[0])
    physical = min_eig >= -TAU_PSD
    pure = False
    if physical:
        sigma = _spectrum_values(sym)[0]
        pure = bool(np.all(np.abs(sigma - 0.5) <= TAU_CLAMP))
    return ValidationReport(n, defect, min_eig, defect <= TAU_SYM, physical, pure)


def as_index_array(region: Iterable[int], n: int) -> np.ndarray:
    """Sorted, de-duplicated mode indices, checked against ``n`` modes."""
    idx = np.unique(np.fromiter((int(i) for i in region), dtype=np.int64))
    if idx.size == 0:
        raise ValidationError("region is empty")
    if idx[0] < 0 or idx[-1] >= n:
        raise ValidationError(f"region index out of range for {n} modes")
    return idx


def reduce(gamma: np.ndarray, region: Iterable[int]) -> np.ndarray:
    """Reduced covariance of ``region``, keeping the (q..., p...) layout."""
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes(gamma)
    idx = as_index_array(region, n)
    both = np.concatenate([idx, idx + n])
    return gamma[np.ix_(both, both)]


def is_block_form(gamma: np.ndarray, tol: float = BLOCK_TOL) -> bool:
    """True when the q-p cross block vanishes, i.e. Gamma = Gamma_q (+) Gamma_p."""
    n = n_modes(gamma)
    cross = gamma[:n, n:]
    return bool(np.abs(cross).max(initial=0.0) <= tol * max(np.abs(gamma).max(), 1.0))


def block_spectrum(gamma_q: np.ndarray, gamma_p: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of Gamma_q (+) Gamma_p, i.e. sqrt(eig(Gamma_q Gamma_p))."""
    try:
        chol = linalg.cholesky(gamma_q, lower=True)
    except linalg.LinAlgError as exc:
        raise UnphysicalError("q block is not positive definite") from exc
    sq = linalg.eigvalsh(chol.T @ gamma_p @ chol)
    if sq[0] < 0:
        raise UnphysicalError("p block is not positive definite")
    return np.sqrt(sq)[::-1]


def _shear_to_block(gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Remove the cross block with the shear p -> p - M q, M = Gamma_q^-1 Gamma_qp.

    The shear is symplectic only when M is symmetric, which holds for pure
    states built from a graph (M is the real part of Z).  Returns None otherwise.
    """
    n = gamma.shape[0] // 2
    q, c, p = gamma[:n, :n], gamma[:n, n:], gamma[n:, n:]
    try:
        chol = linalg.cho_factor(q)
    except linalg.LinAlgError:
        return None
    m = linalg.cho_solve(chol, c)
    if np.abs(m - m.T).max() > BLOCK_TOL * max(np.abs(m).max(), 1.0):
        return None
    p_new = p - c.T @ m
    return q, 0.5 * (p_new + p_new.T)


def _spectrum_values(gamma: np.ndarray) -> tuple[np.ndarray, float]:
    n = n_modes(gamma)
    if is_block_form(gamma):
        return block_spectrum(gamma[:n, :n], gamma[n:, n:]), 0.0
    sheared = _shear_to_block(gamma)
    if sheared is not None:
        return block_spectrum(*sheared), 0.0
    lam, vec = linalg.eigh(gamma)
    if lam[0] <= 0:
        raise UnphysicalError(f"covariance not positive definite (min eig {lam[0]:.3e})")
    root = (vec * np.sqrt(lam)) @ vec.T
    # i Omega is Hermitian, so root (i Omega) root is Hermitian with spectrum +-sigma
    herm = root @ (1j * omega(n)) @ root
    ev = linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    upper = ev[n:]
    lower = -ev[:n][::-1]
    scale = max(np.abs(ev).max(), 1.0)
    residual = float(np.abs(upper - lower).max() / scale)
    if residual > PAIRING_TOL:
        raise NumericalAssertionError(
            f"symplectic eigenvalue pairing residual {residual:.3e} exceeds {PAIRING_TOL:g}"
        )
    return 0.5 * (upper + lower)[::-1], residual


def symplectic_spectrum(gamma: np.ndarray) -> SymplecticSpectrum:
    """Symplectic eigenvalues: the moduli of the eigenvalues of Gamma Omega."""
    gamma = np.asarray(gamma, dtype=float)
    values, residual = _spectrum_values(0.5 * (gamma + gamma.T))
    return SymplecticSpectrum(values, residual)


def _h(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    plus = sigma + 0.5
    minus = sigma - 0.5
    direct = xlogy(plus, plus) - xlogy(minus, minus)
    # for large sigma the two terms cancel; ln(minus) + plus * log1p(1 / minus) does not
    big = sigma > 1.0
    safe = np.where(big, minus, 1.0)
    stable = np.log(safe) + plus * np.log1p(1.0 / safe)
    return np.where(big, stable, direct) / np.log(2.0)


def entropy(spectrum: SymplecticSpectrum | Sequence[float] | np.ndarray) -> float:
    """Von Neumann entropy in bits from symplectic eigenvalues."""
    values = spectrum.values if isinstance(spectrum, SymplecticSpectrum) else spectrum
    sigma = np.atleast_1d(np.asarray(values, dtype=float))
    if sigma.size and sigma.min() < 0.5 - TAU_PSD:
        raise UnphysicalError(f"symplectic eigenvalue {sigma.min():.12g} below 1/2")
    live = sigma[sigma > 0.5 + TAU_CLAMP]
    return float(_h(live).sum())


def region_entropy(gamma: np.ndarray, region: Iterable[int]) -> float:
    return entropy(symplectic_spectrum(reduce(gamma, region)))


def complement(region: Iterable[int], n: int) -> np.ndarray:
    idx = as_index_array(region, n)
    mask = np.ones(n, dtype=bool)
    mask[idx] = False
    return np.flatnonzero(mask)


def mutual_information(gamma: np.ndarray, region: Iterable[int]) -> float:
    """I(X : X^c) = S_X + S_Xc - S_total, in bits."""
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes(gamma)
    idx = as_index_array(region, n)
    rest = complement(idx, n)
    if rest.size == 0:
        raise ValidationError("region complement is empty")
    total = entropy(symplectic_spectrum(gamma))
    return region_entropy(gamma, idx) + region_entropy(gamma, rest) - total


def log_negativity(gamma: np.ndarray, region: Iterable[int]) -> float:
    """Logarithmic negativity of the bipartition region | rest, in bits.

    Only covariances of the form Gamma_q (+) Gamma_p are supported; the partial
    transpose then flips the sign of the region's momenta.  Eigenvalues are taken
    in vacuum-normalized units (2 Gamma), where the vacuum gives exactly 1.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes(gamma)
    if not is_block_form(gamma):
        raise UnsupportedFormError("log_negativity needs a vanishing q-p cross block")
    idx = as_index_array(region, n)
    sign = np.ones(n)
    sign[idx] = -1.0
    gq = 2.0 * gamma[:n, :n]
    gp = 2.0 * gamma[n:, n:] * np.outer(sign, sign)
    chol = linalg.cholesky(gq, lower=True)
    lam = linalg.eigvalsh(chol.T @ gp @ chol)
    return float(-0.5 * np.log2(np.minimum(1.0, lam)).sum())


def log_negativity_pure(spectrum: SymplecticSpectrum | Sequence[float] | np.ndarray) -> float:
    """Log-negativity of a pure state from the reduced spectrum of one side.

    Each reduced eigenvalue sigma = cosh(2r)/2 contributes 2r/ln 2.
    """
    values = spectrum.values if isinstance(spectrum, SymplecticSpectrum) else spectrum
    sigma = np.asarray(values, dtype=float)
    # sqrt amplifies rounding noise at sigma = 1/2, so such modes count as vacuum
    sigma = sigma[sigma > 0.5 + LN_VACUUM_TOL]
    return float(np.log2(2.0 * sigma + np.sqrt(4.0 * sigma**2 - 1.0)).sum())


def is_symplectic(y: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    y = np.asarray(y, dtype=float)
    om = omega(y.shape[0] // 2)
    return bool(np.abs(y @ om @ y.T - om).max() <= tol)


def random_symplectic(n: int, seed: int | np.random.Generator | None = None,
                      max_squeeze: float = 1.0) -> np.ndarray:
    """Random symplectic matrix O1 diag(e^r, e^-r) O2 with |r| <= max_squeeze."""
    if n < 1:
        raise ValidationError(f"need at least one mode, got {n}")
    rng = np.random.default_rng(seed)

    def passive() -> np.ndarray:
        u = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(
            2j * np.pi * rng.random()) * np.ones((1, 1))
        x, y = u.real, u.imag
        return np.block([[x, -y], [y, x]])

    r = rng.uniform(-max_squeeze, max_squeeze, size=n)
    squeeze = np.diag(np.concatenate([np.exp(r), np.exp(-r)]))
    return passive() @ squeeze @ passive()


def apply_symplectic(gamma: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gamma -> Y Gamma Y^T for a symplectic Y."""
    gamma = np.asarray(gamma, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.shape != gamma.shape:
        raise StructuralError(f"transform shape {y.shape} does not match {gamma.shape}")
    if not is_symplectic(y):
        raise ValidationError("transform does not preserve the symplectic form")
    return y @ gamma @ y.T


def direct_sum(*gammas: np.ndarray) -> np.ndarray:
    """Covariance of a product state, keeping the (q..., p...) layout."""
    sizes = [n_modes(g) for g in gammas]
    total = sum(sizes)
    out = np.zeros((2 * total, 2 * total))
    start = 0
    for g, k in zip(gammas, sizes):
        sl = np.r_[start:start + k, total + start:total + start + k]
        out[np.ix_(sl, sl)] = g
        start += k
    return out


def coupled_oscillators(m: float, w: float, lam: float) -> np.ndarray:
    """Ground-state covariance of two oscillators coupled by lam (x1 - x2)^2."""
    alpha = np.sqrt(1.0 + 4.0 * lam / (m * w**2))
    a, b = (1 + alpha) / (m * w * alpha), (1 - alpha) / (m * w * alpha)
    c, d = m * w * (alpha + 1), m * w * (alpha - 1)
    return 0.25 * np.array([[a, b, 0, 0], [b, a, 0, 0], [0, 0, c, d], [0, 0, d, c]])
