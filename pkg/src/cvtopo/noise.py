"""Preparation noise: thermal squeezed inputs and homodyne measurement on mixed states."""

from __future__ import annotations

import numpy as np

from . import graph as gc
from .errors import NumericalAssertionError, ValidationError
from .lattice import ModeLattice, build_cluster_graph, surface_code_pattern, surface_code_state
from .symplectic import n_modes

PINV_RTOL = 1e-12
IDENTITY_TOL = 1e-9


def kappa(beta: float, s: float) -> float:
    """kappa = coth(beta eps0 / 2) with eps0 = 2 / s^2."""
    if beta <= 0:
        raise ValidationError("inverse temperature must be positive")
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    x = beta / s**2
    return 1.0 if x > 40 else float(1.0 / np.tanh(x))


def thermal_scale(gamma: np.ndarray, k: float) -> np.ndarray:
    if k < 1:
        raise ValidationError("kappa must be at least 1")
    return k * np.asarray(gamma, dtype=float)


def measure_covariance(gamma: np.ndarray, j: int, basis: str) -> np.ndarray:
    """Covariance after homodyne of mode j: A - C (Pi B Pi)^+ C^T.

    Pi picks q for basis 'Q' and p for 'P'.  The result drops mode j.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes(gamma)
    if not 0 <= j < n:
        raise ValidationError(f"mode {j} out of range for {n} modes")
    if n == 1:
        raise ValidationError("cannot measure the last remaining mode")
    if basis not in ("Q", "P"):
        raise ValidationError("basis must be 'Q' or 'P'")
    keep = np.r_[[i for i in range(n) if i != j], [n + i for i in range(n) if i != j]]
    idx = j if basis == "Q" else n + j
    b = gamma[idx, idx]
    if b <= PINV_RTOL * max(np.abs(gamma).max(), 1.0):
        raise NumericalAssertionError("measured quadrature has vanishing variance")
    c = gamma[keep, idx]
    return gamma[np.ix_(keep, keep)] - np.outer(c, c) / b


def measure_pattern(gamma: np.ndarray, steps, labels=None) -> tuple[np.ndarray, np.ndarray]:
    """Apply (label, basis) steps in order; returns the covariance and survivor labels."""
    labels = list(range(n_modes(gamma))) if labels is None else list(labels)
    for label, basis in steps:
        j = labels.index(label)
        gamma = measure_covariance(gamma, j, basis)
        labels.pop(j)
    return gamma, np.array(labels)


def mixed_surface_code(lat: ModeLattice, s: float, k: float) -> np.ndarray:
    """kappa Gamma_CS pushed through the surface-code measurements.

    The result is checked against kappa times the pure pipeline covariance.
    """
    if k < 1:
        raise ValidationError("kappa must be at least 1")
    cluster = gc.graph_to_covariance(build_cluster_graph(lat, s))
    pattern, surv = surface_code_pattern(lat)
    mixed, labels = measure_pattern(thermal_scale(cluster, k), pattern)
    if not np.array_equal(labels, surv.labels):
        raise NumericalAssertionError("survivor bookkeeping mismatch")
    z, _ = surface_code_state(lat, s, "dense")
    pure = gc.graph_to_covariance(gc.GraphState(z.toarray()))
    err = np.abs(mixed - k * pure).max()
    if err > IDENTITY_TOL * max(k, 1.0):
        raise NumericalAssertionError(f"mixed state deviates from kappa Gamma_SC by {err:.3e}")
    return mixed
