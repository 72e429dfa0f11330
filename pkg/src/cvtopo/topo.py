"""Region generators and topological witnesses for Gaussian lattice states.

States expose ``reduced(idx)``, the covariance of a set of modes, so that large
surface codes never materialize their full covariance.  Every witness reduces
the union of its regions once and works on sub-blocks of that.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.sparse.linalg import splu

from . import graph as gc
from .errors import GeometryError, NumericalAssertionError, UnphysicalError, ValidationError
from .lattice import ModeLattice, surface_code_closed_form
from .symplectic import (
    TAU_PSD,
    _h,
    entropy,
    is_block_form,
    log_negativity,
    log_negativity_pure,
    mutual_information,
    reduce,
    symplectic_spectrum,
    validate_covariance,
)


# ---------------------------------------------------------------------------
# states


class DenseState:
    """A state given by its full covariance matrix."""

    def __init__(self, gamma: np.ndarray):
        self.gamma = np.asarray(gamma, dtype=float)
        report = validate_covariance(self.gamma)
        if not report.ok:
            raise ValidationError("covariance fails validation")
        self.modes = report.modes
        self.pure = report.pure

    @property
    def block_form(self) -> bool:
        return is_block_form(self.gamma)

    def reduced(self, idx: Sequence[int]) -> np.ndarray:
        return reduce(self.gamma, idx)


class BlockPureState:
    """Pure state with Gamma = 1/2 (U^-1 (+) U) for a sparse positive U."""

    pure = True
    block_form = True

    def __init__(self, u: sparse.spmatrix, spectral_range: tuple[float, float] | None = None):
        self.u = sparse.csc_matrix(u, dtype=float)
        self.modes = self.u.shape[0]
        # eigenvalues of the reduced blocks carry roundoff of order eps * cond(U)
        cond = spectral_range[1] / spectral_range[0] if spectral_range else 1.0
        self.sigma_tol = max(TAU_PSD, 64 * np.finfo(float).eps * cond)

    @cached_property
    def _lu(self):
        return splu(self.u)

    def inverse_columns(self, idx: Sequence[int]) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        rhs = np.zeros((self.modes, idx.size))
        rhs[idx, np.arange(idx.size)] = 1.0
        return self._lu.solve(rhs)

    def reduced(self, idx: Sequence[int]) -> np.ndarray:
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        k = idx.size
        out = np.zeros((2 * k, 2 * k))
        out[:k, :k] = 0.5 * self.inverse_columns(idx)[idx]
        out[k:, k:] = 0.5 * self.u[idx][:, idx].toarray()
        return 0.5 * (out + out.T)


class ClusterState:
    """Cluster state Z = A + i s^-2 I without forming the full covariance.

    Gamma = 1/2 [[s^2 I, s^2 A], [s^2 A, s^-2 I + s^2 A^2]].
    """

    pure = True
    block_form = False

    def __init__(self, adjacency: sparse.spmatrix, s: float):
        if s <= 0:
            raise ValidationError("squeezing must be positive")
        self.a = sparse.csr_matrix(adjacency, dtype=float)
        self.a2 = (self.a @ self.a).tocsr()
        self.s = float(s)
        self.modes = self.a.shape[0]
        # the p block s^-2 + s^2 A^2 loses s^-2 against s^2 A^2 when the cross block is sheared out
        deg = float(np.abs(self.a).sum(axis=1).max()) if self.a.nnz else 0.0
        self.sigma_tol = max(TAU_PSD, 64 * np.finfo(float).eps * self.s**4 * max(deg, 1.0) ** 2)

    def reduced(self, idx: Sequence[int]) -> np.ndarray:
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        k = idx.size
        s2 = self.s**2
        a = self.a[idx][:, idx].toarray()
        a2 = self.a2[idx][:, idx].toarray()
        return 0.5 * np.block([[s2 * np.eye(k), s2 * a], [s2 * a, np.eye(k) / s2 + s2 * a2]])


class ScaledState:
    """kappa times a base state: the preparation-noise model."""

    def __init__(self, base, k: float):
        if k < 1:
            raise ValidationError("kappa must be at least 1")
        self.base = base
        self.kappa = float(k)
        self.modes = base.modes
        self.block_form = base.block_form
        self.pure = base.pure and self.kappa == 1.0

    def reduced(self, idx: Sequence[int]) -> np.ndarray:
        return self.kappa * self.base.reduced(idx)


def as_state(obj):
    return DenseState(obj) if isinstance(obj, np.ndarray) else obj


# ---------------------------------------------------------------------------
# lattice systems and geometry


@dataclass(frozen=True)
class RegionGeometry:
    """Mode coordinates plus the box that regions must stay inside."""

    coords: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def bulk(self) -> np.ndarray:
        inside = np.all((self.coords >= self.lo) & (self.coords <= self.hi), axis=1)
        return np.flatnonzero(inside)

    def index_of(self, point: Sequence[float]) -> int:
        hit = np.flatnonzero(np.all(self.coords == np.asarray(point), axis=1))
        if hit.size != 1:
            raise GeometryError(f"no mode at {tuple(point)}")
        return int(hit[0])


@dataclass
class SurfaceCodeSystem:
    """A planar surface code whose central ``bulk`` x ``bulk`` block hosts the regions.

    Coordinates are the rotated survivor coordinates (u, v), in which
    survivors sharing a code vertex are nearest or diagonal neighbors.
    """

    s: float
    bulk: int = 36
    margin: int = 6
    cluster_size: int | None = None

    def __post_init__(self) -> None:
        if self.s <= 0:
            raise ValidationError("squeezing must be positive")
        if self.bulk < 4 or self.margin < 0:
            raise ValidationError("bulk must be at least 4 and margin non-negative")
        side = self.bulk + 2 * self.margin
        n = self.cluster_size or 2 * side + 3
        self.lattice = ModeLattice(n, n)
        z, self.survivors = surface_code_closed_form(self.lattice, self.s)
        self.real_part_max = float(np.abs(z.real).max()) if z.nnz else 0.0
        self.state = BlockPureState(z.imag, (self.s**-2, self.s**2 * (8 + self.s**-4)))
        coords = np.column_stack([self.survivors.u, self.survivors.v]).astype(float)
        center = np.array([(n + 1) // 2, 1]) - 0.5
        lo = np.floor(center - (self.bulk - 1) / 2)
        hi = lo + self.bulk - 1
        outer_lo, outer_hi = lo - self.margin, hi + self.margin
        present = {tuple(c) for c in coords}
        for corner in ((outer_lo[0], outer_lo[1]), (outer_lo[0], outer_hi[1]),
                       (outer_hi[0], outer_lo[1]), (outer_hi[0], outer_hi[1])):
            if corner not in present:
                raise GeometryError("cluster lattice too small for the requested bulk and margin")
        self.geometry = RegionGeometry(coords, lo, hi)

    @property
    def modes(self) -> int:
        return self.state.modes

    def index_from_cluster(self, row: int, col: int) -> int:
        label = self.lattice.index(row, col)
        hit = np.flatnonzero(self.survivors.labels == label)
        if hit.size != 1:
            raise GeometryError(f"cluster site ({row}, {col}) is not a surviving mode")
        return int(hit[0])


@dataclass
class ClusterSystem:
    """The square cluster state with a central bulk block, in cluster coordinates."""

    s: float
    bulk: int = 36
    margin: int = 6

    def __post_init__(self) -> None:
        n = self.bulk + 2 * self.margin
        self.lattice = ModeLattice(n, n)
        self.state = ClusterState(self.lattice.adjacency(), self.s)
        coords = np.array([self.lattice.coords(i) for i in range(self.lattice.size)], dtype=float)
        lo = np.full(2, self.margin + 1.0)
        self.geometry = RegionGeometry(coords, lo, lo + self.bulk - 1)

    @property
    def modes(self) -> int:
        return self.state.modes


def _check_region(geom: RegionGeometry, idx: np.ndarray, margin: int, name: str) -> np.ndarray:
    if idx.size == 0:
        raise GeometryError(f"region {name} is empty")
    pts = geom.coords[idx]
    if np.any(pts < geom.lo + margin) or np.any(pts > geom.hi - margin):
        raise GeometryError(f"region {name} comes within {margin} modes of the bulk edge")
    return idx


def _polar(geom: RegionGeometry, center) -> tuple[np.ndarray, np.ndarray]:
    c = geom.center if center is None else np.asarray(center, dtype=float)
    d = geom.coords - c
    return np.hypot(d[:, 0], d[:, 1]), np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * np.pi)


def kp_regions(geom: RegionGeometry, center=None, radius: float = 8.0, margin: int = 2,
               start: float = np.pi / 2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Disk of ``radius`` split into three 120 degree sectors starting at ``start``."""
    if radius < 1:
        raise GeometryError("radius below one mode spacing")
    r, th = _polar(geom, center)
    sector = np.floor(np.mod(th - start, 2 * np.pi) / (2 * np.pi / 3)).astype(int)
    sector = np.minimum(sector, 2)  # an angle that rounds up to 2 pi closes the last sector
    disk = r <= radius
    out = tuple(_check_region(geom, np.flatnonzero(disk & (sector == k)), margin, "ABC"[k])
                for k in range(3))
    return out  # type: ignore[return-value]


def lw_regions(geom: RegionGeometry, center=None, r_in: float = 5.0, r_out: float = 9.0,
               cut: float = np.pi / 2, margin: int = 2
               ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Annulus A; B cut at the top, C cut at the bottom, D cut at both.

    Each cut removes a wedge of opening ``cut``, so |A| - |B| = |C| - |D|.
    """
    if not 0 < r_in < r_out:
        raise GeometryError("need 0 < r_in < r_out")
    r, th = _polar(geom, center)
    ring = (r >= r_in) & (r <= r_out)
    top = np.abs(np.angle(np.exp(1j * (th - np.pi / 2)))) < cut / 2
    bottom = np.abs(np.angle(np.exp(1j * (th + np.pi / 2)))) < cut / 2
    masks = (ring, ring & ~top, ring & ~bottom, ring & ~top & ~bottom)
    out = tuple(_check_region(geom, np.flatnonzero(m), margin, "ABCD"[k])
                for k, m in enumerate(masks))
    a, b, c, d = (x.size for x in out)
    if a - b != c - d:
        raise GeometryError("annulus cuts are not equivalent")
    return out  # type: ignore[return-value]


def regions_from_json(path: str, index_of) -> dict[str, np.ndarray]:
    """Load {"A": [[row, col], ...], ...}; ``index_of(row, col)`` maps to mode indices."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValidationError("region file must map names to [row, col] lists")
    return {k: np.array(sorted({index_of(int(r), int(c)) for r, c in v}), dtype=np.int64)
            for k, v in raw.items()}


# ---------------------------------------------------------------------------
# entropies over unions of regions


class RegionSpectra:
    """Symplectic spectra of unions of named regions from one reduction."""

    def __init__(self, state, regions: Mapping[str, Sequence[int]]):
        self.state = as_state(state)
        self.regions = {k: np.unique(np.asarray(v, dtype=np.int64)) for k, v in regions.items()}
        union = np.unique(np.concatenate(list(self.regions.values())))
        if union.size and (union[0] < 0 or union[-1] >= self.state.modes):
            raise ValidationError("region index out of range")
        self.union = union
        self.gamma = self.state.reduced(union)
        self._pos = {int(m): i for i, m in enumerate(union)}
        self._cache: dict[str, np.ndarray] = {}

    def local(self, names: str) -> np.ndarray:
        idx = np.unique(np.concatenate([self.regions[n] for n in names]))
        return np.array([self._pos[int(m)] for m in idx])

    def spectrum(self, names: str) -> np.ndarray:
        key = "".join(sorted(names))
        if key not in self._cache:
            sig = symplectic_spectrum(reduce(self.gamma, self.local(key))).values
            tol = getattr(self.state, "sigma_tol", TAU_PSD) * getattr(self.state, "kappa", 1.0)
            if sig.size and sig.min() < 0.5 - tol:
                raise UnphysicalError(f"symplectic eigenvalue {sig.min():.12g} below 1/2")
            self._cache[key] = np.maximum(sig, 0.5)
        return self._cache[key]

    def entropy(self, names: str) -> float:
        return entropy(self.spectrum(names))


def _kp_combination(f) -> float:
    return -(f("A") + f("B") + f("C") - f("AB") - f("BC") - f("AC") + f("ABC"))


def _require_pure(state) -> None:
    if not state.pure:
        raise ValidationError("state is mixed; use tmi for mixed states")


def tee_kp(state, a, b, c) -> float:
    """Kitaev-Preskill combination -(S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC)."""
    state = as_state(state)
    _require_pure(state)
    rs = RegionSpectra(state, {"A": a, "B": b, "C": c})
    return _kp_combination(rs.entropy)


def tee_lw(state, a, b, c, d) -> float:
    """Levin-Wen combination -1/2 [(S_A - S_B) - (S_C - S_D)]."""
    state = as_state(state)
    _require_pure(state)
    rs = RegionSpectra(state, {"A": a, "B": b, "C": c, "D": d})
    return -0.5 * ((rs.entropy("A") - rs.entropy("B")) - (rs.entropy("C") - rs.entropy("D")))


def tln_kp(state, a, b, c, method: str = "auto") -> float:
    """Kitaev-Preskill combination of log-negativities between X and the rest.

    ``method="direct"`` evaluates the partial-transpose formula on a dense
    covariance; ``"pure"`` uses the reduced spectrum of X, valid for pure states.
    """
    state = as_state(state)
    if not state.block_form:
        raise ValidationError("log-negativity needs a vanishing q-p cross block")
    if method == "auto":
        method = "pure" if state.pure else "direct"
    if method == "direct":
        if not isinstance(state, DenseState):
            raise ValidationError("the direct route needs a dense covariance")
        regions = {"A": a, "B": b, "C": c}

        def ln(names: str) -> float:
            idx = np.unique(np.concatenate([np.asarray(regions[n]) for n in names]))
            return log_negativity(state.gamma, idx)

        return _kp_combination(ln)
    if method != "pure":
        raise ValidationError(f"unknown method {method!r}")
    _require_pure(state)
    rs = RegionSpectra(state, {"A": a, "B": b, "C": c})
    return _kp_combination(lambda x: log_negativity_pure(rs.spectrum(x)))


ZETA = {"A": 1, "B": 1, "C": 1, "AB": -1, "BC": -1, "AC": -1, "ABC": 1}


def _h_kappa_excess(sigma: np.ndarray, k: float) -> float:
    """sum_i [h(k sigma_i) - h(k / 2)], with h(1/2) = 0."""
    sig = np.maximum(np.asarray(sigma, dtype=float), 0.5)
    vals = _h(k * sig) - _h(np.array([k / 2]))[0] if k > 1 else _h_clamped(sig)
    return float(np.sum(vals))


def _h_clamped(sig: np.ndarray) -> np.ndarray:
    out = np.zeros_like(sig)
    live = sig > 0.5 + 1e-7
    out[live] = _h(sig[live])
    return out


def region_mutual_informations(state, regions: Mapping[str, Sequence[int]],
                               names: Iterable[str]) -> dict[str, float]:
    """I(X : X^c) for each union X of named regions.

    For kappa times a pure state, I_X = 2 sum_{sigma in X} [h(kappa sigma) - h(kappa/2)]
    because the complement carries the same spectrum plus vacuum-like modes.
    Dense states use the direct definition S_X + S_Xc - S_total.
    """
    state = as_state(state)
    if isinstance(state, ScaledState) and state.base.pure:
        rs = RegionSpectra(state.base, regions)
        return {n: 2 * _h_kappa_excess(rs.spectrum(n), state.kappa) for n in names}
    if getattr(state, "pure", False) and not isinstance(state, DenseState):
        rs = RegionSpectra(state, regions)
        return {n: 2 * rs.entropy(n) for n in names}
    if not isinstance(state, DenseState):
        raise ValidationError("mutual information needs a dense or kappa-scaled pure state")
    out = {}
    for n in names:
        idx = np.unique(np.concatenate([np.asarray(regions[x]) for x in n]))
        out[n] = mutual_information(state.gamma, idx)
    return out


def tmi(state, a, b, c) -> float:
    """-1/2 (I_A + I_B + I_C - I_AB - I_BC - I_AC + I_ABC) with I_X = I(X : X^c)."""
    mi = region_mutual_informations(state, {"A": a, "B": b, "C": c}, ZETA)
    return -0.5 * sum(ZETA[n] * mi[n] for n in ZETA)


def tmi_high_temp_limit(state, a, b, c, form: str = "exact") -> float:
    """kappa -> infinity limit of :func:`tmi` for kappa times a pure state.

    ``exact``: h(kappa sigma) - h(kappa/2) -> log2(2 sigma), so
    gamma^l = -sum_X zeta(X) sum_{sigma in X} log2(2 sigma).
    ``primed``: the same expression with log2(e sigma) summed only over sigma > 1/2
    and the count terms in log2(e/2) assumed to cancel.
    """
    state = as_state(state)
    base = state.base if isinstance(state, ScaledState) else state
    _require_pure(base)
    rs = RegionSpectra(base, {"A": a, "B": b, "C": c})
    total = 0.0
    for n, z in ZETA.items():
        sig = rs.spectrum(n)
        if form == "exact":
            total += z * float(np.sum(np.log2(2 * np.maximum(sig, 0.5))))
        elif form == "primed":
            live = sig[sig > 0.5 + 1e-7]
            total += z * float(np.sum(np.log2(np.e * live)))
        else:
            raise ValidationError(f"unknown form {form!r}")
    return -total


@dataclass(frozen=True)
class WoottonBounds:
    lower: float
    upper: float
    i_ef: float
    i_ef1: float
    i_ef2: float

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return self.lower - tol <= value <= self.upper + tol


def tmi_wootton_bounds(state, e, f1, f2) -> WoottonBounds:
    """max(I(E:F) - I(E:F1) - I(E:F2), 0) <= gamma_MI <= I(E:F) - max(I(E:F1), I(E:F2)).

    F is the union of F1 and F2; I(X:Y) = S_X + S_Y - S_XY.
    """
    rs = RegionSpectra(as_state(state), {"E": e, "F": f1, "G": f2})

    def mi(x: str, y: str) -> float:
        return rs.entropy(x) + rs.entropy(y) - rs.entropy(x + y)

    i_ef, i1, i2 = mi("E", "FG"), mi("E", "F"), mi("E", "G")
    return WoottonBounds(max(i_ef - i1 - i2, 0.0), i_ef - max(i1, i2), i_ef, i1, i2)


# ---------------------------------------------------------------------------
# analytic bounds


def three_mode_network(s: float) -> np.ndarray:
    """Three squeezed modes each linked to a fourth, which is then measured in p.

    Returns U of the surviving three modes; it equals s^-2 I + s^2 J.
    """
    g = gc.vacua_graph(4)
    for j in range(4):
        g = gc.squeeze(g, j, s)
    for j in range(1, 4):
        g = gc.controlled_z(g, 0, j)
    g = gc.measure_p(g, 0)
    if np.abs(g.V).max() > 1e-12:
        raise NumericalAssertionError("network acquired a real part")
    return g.U


def tee_upper_bound(s: float) -> tuple[float, float]:
    """(sigma_1, S_bound) for one mode of the three-mode network."""
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    s4 = s**4
    sigma = 0.5 * np.sqrt((1 + 3 * s4 + 2 * s4**2) / (1 + 3 * s4))
    return float(sigma), entropy([sigma])


def squeezing_conventions(s: float) -> tuple[float, float, float]:
    """(s, natural log s, dB = 10 log10 s^2)."""
    return float(s), float(np.log(s)), float(20 * np.log10(s))


# ---------------------------------------------------------------------------
# correlations


def demko_constants(s: float) -> tuple[float, float]:
    """(C, xi) of the exponential bound <q_i q_j> <= C exp(-(d + 1) / xi)."""
    root = np.sqrt(8 * s**4 + 1)
    c = (1 + root) ** 2 / (4 * (8 * s**2 + s**-2))
    xi = 2 / np.log((root + 1) / (root - 1))
    return float(c), float(xi)


def chebyshev_distance(coords: np.ndarray, i: int, j: np.ndarray | int) -> np.ndarray:
    return np.abs(coords[j] - coords[i]).max(axis=-1)


def _two_exp(r, a, xa, b, xb):
    return a * np.exp(-r / xa) + b * np.exp(-r / xb)


@dataclass(frozen=True)
class CorrelationProfile:
    separations: np.ndarray
    values: np.ndarray
    p_values: np.ndarray
    fit: tuple[float, float, float, float] | None
    residual: float
    demko_max_ratio: float
    p_beyond_one_max: float
    qp_max: float
    flags: tuple[str, ...] = field(default=())

    @property
    def xi_a(self) -> float:
        return float("nan") if self.fit is None else self.fit[1]

    @property
    def xi_b(self) -> float:
        return float("nan") if self.fit is None else self.fit[3]

    @property
    def demko_ok(self) -> bool:
        return self.demko_max_ratio <= 1.0


def fit_two_exponentials(r: np.ndarray, y: np.ndarray) -> tuple[tuple[float, ...] | None, float]:
    """Least squares of log|y| against log(a e^{-r/xa} + b e^{-r/xb}).

    Starts from a single-exponential fit to the tail (slow component) and a
    steep component through the first point.
    """
    y = np.abs(y)
    r = np.asarray(r, dtype=float)
    half = max(len(r) // 2, 2)
    slope, icpt = np.polyfit(r[-half:], np.log(y[-half:]), 1)
    xb0 = -1 / slope if slope < 0 else float(r[-1])
    b0 = float(np.exp(icpt))
    a0 = max(y[0] - b0 * np.exp(-r[0] / xb0), 1e-3 * y[0]) * np.exp(r[0] / 0.3)
    model = lambda rr, la, xa, lb, xb: np.log(_two_exp(rr, np.exp(la), xa, np.exp(lb), xb))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            warnings.simplefilter("ignore", RuntimeWarning)
            p, _ = curve_fit(model, r, np.log(y), p0=[np.log(a0), 0.3, np.log(b0), xb0],
                             bounds=([-np.inf, 1e-3, -np.inf, 1e-3], [np.inf, 1e3, np.inf, 1e3]),
                             maxfev=20000)
    except (RuntimeError, ValueError):
        return None, float("nan")
    a, xa, b, xb = np.exp(p[0]), p[1], np.exp(p[2]), p[3]
    if xa > xb:
        a, xa, b, xb = b, xb, a, xa
    resid = float(np.sqrt(np.mean((model(r, *p) - np.log(y)) ** 2)))
    return (float(a), float(xa), float(b), float(xb)), resid


def correlation_profile(system: SurfaceCodeSystem, axis: str = "u", max_sep: int = 12,
                        origin: Sequence[float] | None = None) -> CorrelationProfile:
    """q-correlations from the bulk center along a rotated lattice axis.

    The Demko bound is checked for every mode of the lattice against the
    origin; p-correlations and the q-p block are read off the same state.
    """
    geom = system.geometry
    step = {"u": np.array([1.0, 0.0]), "v": np.array([0.0, 1.0])}.get(axis)
    if step is None:
        raise ValidationError("axis must be 'u' or 'v'")
    o = np.floor(geom.center) if origin is None else np.asarray(origin, dtype=float)
    i0 = geom.index_of(o)
    col = 0.5 * system.state.inverse_columns([i0])[:, 0]
    seps = np.arange(1, max_sep + 1)
    idx = np.array([geom.index_of(o + k * step) for k in seps])
    values = col[idx]
    u = system.state.u
    p_row = 0.5 * u[:, [i0]].toarray()[:, 0]
    p_values = p_row[idx]
    cheb = chebyshev_distance(geom.coords, i0, np.arange(system.modes))
    p_beyond = float(np.abs(p_row[cheb > 1]).max(initial=0.0))
    c, xi = demko_constants(system.s)
    ratio = float((np.abs(col) / (c * np.exp(-(cheb + 1) / xi))).max())
    fit, resid = fit_two_exponentials(seps, values)
    flags = () if fit is not None else ("fit-failed",)
    # the q-p block is U^-1 V, and V is the real part of Z
    qp = system.real_part_max
    return CorrelationProfile(seps, values, p_values, fit, resid, ratio, p_beyond, qp, flags)

