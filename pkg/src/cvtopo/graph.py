"""Pure Gaussian states as complex adjacency matrices Z = V + iU.

A state with Z has wavefunction ~ exp(i q^T Z q / 2) and nullifiers p - Z q.
Gates act on Z by the linear-fractional rule Z -> (C + D Z)(A + B Z)^-1 for a
symplectic [[A, B], [C, D]]; single-mode gates reduce to a rank-one update.
Every operation returns a new :class:`GraphState`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np
from scipy import linalg

from .errors import DegenerateStateError, NumericalAssertionError, ValidationError

SYM_TOL = 1e-10
SINGULAR_TOL = 1e-12


class SingularTransformError(ValidationError):
    """The single-mode update divides by a + b t ~ 0."""


@dataclass(frozen=True)
class GraphState:
    """Complex symmetric Z with the original label of every surviving mode."""

    Z: np.ndarray
    labels: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        z = np.array(self.Z, dtype=complex)
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise ValidationError(f"Z must be square, got shape {z.shape}")
        z.setflags(write=False)
        object.__setattr__(self, "Z", z)
        labels = np.arange(z.shape[0]) if self.labels is None else np.asarray(self.labels)
        if labels.shape != (z.shape[0],):
            raise ValidationError("labels must have one entry per mode")
        labels = labels.copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def modes(self) -> int:
        return self.Z.shape[0]

    @property
    def U(self) -> np.ndarray:
        return self.Z.imag

    @property
    def V(self) -> np.ndarray:
        return self.Z.real

    def with_z(self, z: np.ndarray) -> "GraphState":
        return GraphState(_symmetrize(z), self.labels)

    def check(self) -> None:
        """Raise unless Z is symmetric and U positive definite."""
        if np.abs(self.Z - self.Z.T).max(initial=0.0) > SYM_TOL:
            raise NumericalAssertionError("Z is not symmetric")
        if self.modes and linalg.eigvalsh(self.U)[0] <= 0:
            raise DegenerateStateError("U is not positive definite")


def _symmetrize(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    scale = max(np.abs(z).max(initial=0.0), 1.0)
    if np.abs(z - z.T).max(initial=0.0) > SYM_TOL * scale:
        raise NumericalAssertionError("gate update broke the symmetry of Z")
    return 0.5 * (z + z.T)


def _check_mode(g: GraphState, j: int) -> int:
    j = int(j)
    if not 0 <= j < g.modes:
        raise ValidationError(f"mode {j} out of range for {g.modes} modes")
    return j


def vacua_graph(n: int) -> GraphState:
    if n < 1:
        raise ValidationError(f"need at least one mode, got {n}")
    return GraphState(1j * np.eye(n))


def apply_single_mode(g: GraphState, j: int, a: float, b: float, c: float, d: float) -> GraphState:
    """Act with [[a, b], [c, d]] (unit determinant) on mode j's (q, p)."""
    j = _check_mode(g, j)
    if abs(a * d - b * c - 1.0) > 1e-10:
        raise ValidationError(f"single-mode map has determinant {a * d - b * c}")
    z = np.array(g.Z)
    t = z[j, j]
    denom = a + b * t
    if abs(denom) < SINGULAR_TOL:
        raise SingularTransformError(f"a + b t = {denom} is singular on mode {j}")
    f = z[:, j].copy()
    f[j] = 0.0
    if b != 0.0:
        z -= b * np.outer(f, f) / denom
    z[:, j] = f / denom
    z[j, :] = f / denom
    z[j, j] = (c + d * t) / denom
    return g.with_z(z)


def squeeze(g: GraphState, j: int, s: float) -> GraphState:
    """Squeezer diag(s, 1/s): q -> s q, p -> p / s."""
    if s <= 0:
        raise ValidationError("squeeze factor must be positive")
    return apply_single_mode(g, j, s, 0.0, 0.0, 1.0 / s)


def phase_shift(g: GraphState, j: int, theta: float) -> GraphState:
    """Rotation [[cos, sin], [-sin, cos]] of mode j's phase space."""
    c, s = np.cos(theta), np.sin(theta)
    # snap the quarter turns so measure_p stays exact
    c = 0.0 if abs(c) < 1e-15 else c
    s = 0.0 if abs(s) < 1e-15 else s
    return apply_single_mode(g, j, c, s, -s, c)


def fourier(g: GraphState, j: int) -> GraphState:
    return phase_shift(g, j, -np.pi / 2)


def controlled_z(g: GraphState, j: int, k: int, weight: float = 1.0) -> GraphState:
    """Weighted C_Z: adds ``weight`` to Z[j, k] and Z[k, j]."""
    j, k = _check_mode(g, j), _check_mode(g, k)
    if j == k:
        raise ValidationError("controlled-Z needs two distinct modes")
    z = np.array(g.Z)
    z[j, k] += weight
    z[k, j] += weight
    return GraphState(z, g.labels)


def measure_q(g: GraphState, j: int) -> GraphState:
    """Homodyne q measurement with zero outcome: delete row and column j."""
    j = _check_mode(g, j)
    if g.modes == 1:
        raise ValidationError("cannot measure the last remaining mode")
    keep = np.delete(np.arange(g.modes), j)
    return GraphState(g.Z[np.ix_(keep, keep)], g.labels[keep])


def measure_p(g: GraphState, j: int) -> GraphState:
    """Homodyne p measurement: a quarter-turn phase shift, then measure q."""
    return measure_q(phase_shift(g, j, np.pi / 2), j)


def position_of(g: GraphState, label: int) -> int:
    """Current index of the mode that carried ``label`` originally."""
    hits = np.flatnonzero(g.labels == label)
    if hits.size != 1:
        raise ValidationError(f"label {label} is not a surviving mode")
    return int(hits[0])


def graph_to_covariance(g: GraphState) -> np.ndarray:
    """Gamma = 1/2 [[U^-1, U^-1 V], [V U^-1, U + V U^-1 V]]."""
    u, v = g.U, g.V
    try:
        chol = linalg.cho_factor(u)
    except linalg.LinAlgError as exc:
        raise DegenerateStateError("U is not positive definite") from exc
    uinv = linalg.cho_solve(chol, np.eye(g.modes))
    if np.abs(u @ uinv - np.eye(g.modes)).max() > 1e-8:
        raise DegenerateStateError("U is numerically singular")
    uinv_v = uinv @ v
    gamma = 0.5 * np.block([[uinv, uinv_v], [uinv_v.T, u + v @ uinv_v]])
    return 0.5 * (gamma + gamma.T)


def rescale_uniform_weight(g: GraphState, weight: float) -> tuple[GraphState, float]:
    """Map Z = g V + i eps I to V + i (eps/g) I; return the state and s~ = sqrt(g/eps).

    Z -> Z / g is a local squeezer on every mode, so entanglement is unchanged.
    """
    if weight <= 0:
        raise ValidationError("edge weight must be positive")
    diag = np.diag(g.U)
    off = g.U - np.diag(diag)
    if np.abs(off).max(initial=0.0) > SYM_TOL or np.ptp(diag) > SYM_TOL * max(abs(diag[0]), 1.0):
        raise ValidationError("imaginary part must be a uniform multiple of the identity")
    eps = float(diag[0])
    v = g.V / weight
    if not np.allclose(v, np.round(v), atol=1e-9) or not set(np.unique(np.round(v))) <= {0.0, 1.0}:
        raise ValidationError("real part divided by the weight must be a 0/1 adjacency")
    out = GraphState(np.round(v) + 1j * (eps / weight) * np.eye(g.modes), g.labels)
    return out, float(np.sqrt(weight / eps))


def single_mode_symplectic(n: int, j: int, a: float, b: float, c: float, d: float) -> np.ndarray:
    """The 2n x 2n symplectic matrix of a single-mode gate on mode j."""
    y = np.eye(2 * n)
    y[j, j], y[j, n + j], y[n + j, j], y[n + j, n + j] = a, b, c, d
    return y


def controlled_z_symplectic(n: int, j: int, k: int, weight: float = 1.0) -> np.ndarray:
    """C_Z[weight] as p_j += w q_k, p_k += w q_j."""
    y = np.eye(2 * n)
    y[n + j, k] = weight
    y[n + k, j] = weight
    return y


def dump_graph(g: GraphState, stream: TextIO, tol: float = 0.0) -> None:
    """Write one line ``i j re im`` per nonzero entry with i <= j (self-loops included)."""
    z = g.Z
    for i in range(g.modes):
        for j in range(i, g.modes):
            if abs(z[i, j]) > tol:
                stream.write(f"{i} {j} {z[i, j].real:.17g} {z[i, j].imag:.17g}\n")
