"""Cluster states, the surface-code measurement pattern, and nullifier algebra.

Cluster sites are labeled (row, col) from 1 in row-major order.  Sites with
both coordinates odd are measured in p, both even in q; the survivors
(row + col odd) are the edge modes of the code graph.  Each p-measured site
is a code vertex and each q-measured site a code face.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Literal, Sequence

import numpy as np
from scipy import sparse

from . import graph as gc
from .errors import NumericalAssertionError, ValidationError
from .symplectic import omega

Boundary = Literal["planar", "toroidal"]
Basis = Literal["Q", "P"]

BULK_TOL = 1e-10
ZERO_TOL = 1e-12


class DegeneratePatternError(ValidationError):
    """A measurement pattern leaves an under-determined nullifier set."""


@dataclass(frozen=True)
class ModeLattice:
    rows: int
    cols: int
    boundary: Boundary = "planar"

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValidationError("lattice dimensions must be positive")
        if self.boundary not in ("planar", "toroidal"):
            raise ValidationError(f"unknown boundary {self.boundary!r}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def index(self, row: int, col: int) -> int:
        """Row-major index of the 1-based site (row, col)."""
        if self.boundary == "toroidal":
            row = (row - 1) % self.rows + 1
            col = (col - 1) % self.cols + 1
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise ValidationError(f"site ({row}, {col}) outside the lattice")
        return (row - 1) * self.cols + (col - 1)

    def coords(self, index: int) -> tuple[int, int]:
        return index // self.cols + 1, index % self.cols + 1

    def neighbors(self, row: int, col: int) -> list[tuple[int, int]]:
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            r, c = row + dr, col + dc
            if self.boundary == "toroidal":
                out.append(((r - 1) % self.rows + 1, (c - 1) % self.cols + 1))
            elif 1 <= r <= self.rows and 1 <= c <= self.cols:
                out.append((r, c))
        return out

    def edges(self) -> list[tuple[int, int]]:
        """Unique undirected nearest-neighbor pairs (i < j)."""
        found = set()
        for i in range(self.size):
            r, c = self.coords(i)
            for rr, cc in self.neighbors(r, c):
                j = self.index(rr, cc)
                if i != j:
                    found.add((min(i, j), max(i, j)))
        return sorted(found)

    def adjacency(self) -> sparse.csr_matrix:
        e = np.array(self.edges(), dtype=np.int64).reshape(-1, 2)
        data = np.ones(2 * len(e))
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.size, self.size))


def site_kind(row: int, col: int) -> str:
    """'P' for code vertices, 'Q' for code faces, 'E' for surviving edge modes."""
    if row % 2 and col % 2:
        return "P"
    if not row % 2 and not col % 2:
        return "Q"
    return "E"


@dataclass(frozen=True)
class MeasurementPattern:
    steps: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        modes = [m for m, _ in self.steps]
        if len(set(modes)) != len(modes):
            raise ValidationError("a mode appears twice in the measurement pattern")
        if any(b not in ("Q", "P") for _, b in self.steps):
            raise ValidationError("measurement basis must be 'Q' or 'P'")

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class SurvivorLattice:
    """Surviving edge modes with cluster and rotated coordinates.

    Rotated coordinates u = (row + col - 1) / 2, v = (col - row + 1) / 2 turn the
    survivors into a square grid in which nearest neighbors share a vertex.
    """

    cluster: ModeLattice
    labels: np.ndarray
    rows: np.ndarray
    cols: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def u(self) -> np.ndarray:
        return (self.rows + self.cols - 1) // 2

    @property
    def v(self) -> np.ndarray:
        return (self.cols - self.rows + 1) // 2

    def csv_rows(self) -> list[str]:
        lines = ["index,row,col"]
        lines += [f"{i},{r},{c}" for i, (r, c) in enumerate(zip(self.rows, self.cols))]
        return lines


def surface_code_pattern(lat: ModeLattice) -> tuple[MeasurementPattern, SurvivorLattice]:
    """p on (odd, odd) sites, q on (even, even) sites, in row-major order."""
    if lat.boundary == "toroidal" and (lat.rows % 2 or lat.cols % 2):
        raise ValidationError("a toroidal cluster needs even side lengths for the parity pattern")
    steps, surv = [], []
    for i in range(lat.size):
        r, c = lat.coords(i)
        kind = site_kind(r, c)
        if kind == "E":
            surv.append(i)
        else:
            steps.append((i, kind))
    labels = np.array(surv, dtype=np.int64)
    rc = np.array([lat.coords(i) for i in surv], dtype=np.int64).reshape(-1, 2)
    return MeasurementPattern(tuple(steps)), SurvivorLattice(lat, labels, rc[:, 0], rc[:, 1])


def cluster_closed_form(lat: ModeLattice, s: float) -> sparse.csr_matrix:
    """Z_CS = A + i s^-2 I as a sparse complex matrix."""
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    return (lat.adjacency().astype(complex) + 1j * s**-2 * sparse.identity(lat.size)).tocsr()


def build_cluster_graph(lat: ModeLattice, s: float) -> gc.GraphState:
    """Squeeze every vacuum by s, then C_Z along every lattice edge."""
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    g = gc.vacua_graph(lat.size)
    for j in range(lat.size):
        g = gc.squeeze(g, j, s)
    for i, j in lat.edges():
        g = gc.controlled_z(g, i, j, 1.0)
    closed = cluster_closed_form(lat, s).toarray()
    if np.abs(g.Z - closed).max() > 1e-12:
        raise NumericalAssertionError("cluster pipeline disagrees with A + i s^-2 I")
    return g


def apply_pattern(g: gc.GraphState, pattern: MeasurementPattern) -> gc.GraphState:
    """Run a measurement pattern on a dense graph state (labels track survivors)."""
    for label, basis in pattern:
        j = gc.position_of(g, label)
        g = gc.measure_p(g, j) if basis == "P" else gc.measure_q(g, j)
    return g


class SparseGraph:
    """Mutable sparse Z for large lattices, using the same update rules.

    A p measurement applies the quarter-turn update (fill-in W -= f f^T / t)
    and then deletes the mode; a q measurement only deletes it.
    """

    def __init__(self, z: sparse.spmatrix):
        z = sparse.coo_matrix(z)
        self.adj: dict[int, dict[int, complex]] = {i: {} for i in range(z.shape[0])}
        for i, j, val in zip(z.row, z.col, z.data):
            if val != 0:
                self.adj[int(i)][int(j)] = self.adj[int(i)].get(int(j), 0) + complex(val)

    def measure_p(self, j: int) -> None:
        row = self.adj[j]
        t = row.get(j, 0.0)
        if abs(t) < gc.SINGULAR_TOL:
            raise gc.SingularTransformError(f"zero diagonal on mode {j}")
        nbrs = [(k, z) for k, z in row.items() if k != j]
        for k1, z1 in nbrs:
            target = self.adj[k1]
            for k2, z2 in nbrs:
                target[k2] = target.get(k2, 0.0) - z1 * z2 / t
        self.measure_q(j)

    def measure_q(self, j: int) -> None:
        for k in self.adj.pop(j):
            if k != j:
                self.adj[k].pop(j, None)

    def to_csr(self, labels: Sequence[int]) -> sparse.csr_matrix:
        pos = {lab: n for n, lab in enumerate(labels)}
        rows, cols, vals = [], [], []
        for i, row in self.adj.items():
            for j, val in row.items():
                rows.append(pos[i])
                cols.append(pos[j])
                vals.append(val)
        n = len(labels)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex)


def vertex_incidence(surv: SurvivorLattice) -> sparse.csr_matrix:
    """Unsigned incidence of code vertices (p sites) and surviving edge modes."""
    lat = surv.cluster
    col_of = {int(lab): n for n, lab in enumerate(surv.labels)}
    rows, cols = [], []
    verts = [i for i in range(lat.size) if site_kind(*lat.coords(i)) == "P"]
    for vi, i in enumerate(verts):
        for rr, cc in lat.neighbors(*lat.coords(i)):
            rows.append(vi)
            cols.append(col_of[lat.index(rr, cc)])
    return sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(verts), surv.size))


def surface_code_state(lat: ModeLattice, s: float, method: str = "auto"
                       ) -> tuple[sparse.csr_matrix, SurvivorLattice]:
    """Measurement pipeline from the cluster state to the surface code.

    Returns Z over the survivors in ascending label order.  ``method`` selects the
    dense graph-state route or the sparse accelerator ("auto" picks by size).
    """
    pattern, surv = surface_code_pattern(lat)
    if surv.size == 0:
        raise ValidationError("lattice has no surviving modes")
    if method == "auto":
        method = "dense" if lat.size <= 144 else "sparse"
    if method == "dense":
        g = apply_pattern(build_cluster_graph(lat, s), pattern)
        if not np.array_equal(g.labels, surv.labels):
            raise NumericalAssertionError("survivor bookkeeping mismatch")
        z = sparse.csr_matrix(g.Z)
    elif method == "sparse":
        sg = SparseGraph(cluster_closed_form(lat, s))
        for label, basis in pattern:
            sg.measure_p(label) if basis == "P" else sg.measure_q(label)
        z = sg.to_csr(surv.labels)
    else:
        raise ValidationError(f"unknown method {method!r}")
    z.data[np.abs(z.data) < ZERO_TOL * max(s**2, 1.0)] = 0
    z.eliminate_zeros()
    if z.nnz and np.abs(z.real).max() > BULK_TOL * max(s**2, 1.0):
        raise NumericalAssertionError("surface-code Z acquired a real part")
    return z, surv


def surface_code_closed_form(lat: ModeLattice, s: float, boundary_corrected: bool = True
                             ) -> tuple[sparse.csr_matrix, SurvivorLattice]:
    """Z_SC = i U_SC with U_SC = s^2 A_SC + (s^-2 + 2 s^2) I.

    A_SC links survivors that share a code vertex.  With ``boundary_corrected``
    the diagonal counts the actual number of adjacent vertices, which is what
    the pipeline produces on planar edges (U = s^2 B^T B + s^-2 I).
    """
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    _, surv = surface_code_pattern(lat)
    b = vertex_incidence(surv)
    btb = (b.T @ b).tocsr()
    diag = btb.diagonal()
    a_sc = btb - sparse.diags(diag)
    a_sc.eliminate_zeros()
    d = diag if boundary_corrected else np.full(surv.size, 2.0)
    u = s**2 * a_sc + sparse.diags(s**-2 + s**2 * d)
    return (1j * u).tocsr(), surv


def bulk_modes(surv: SurvivorLattice, depth: int = 3) -> np.ndarray:
    """Survivors at least ``depth`` cluster units from every planar edge."""
    lat = surv.cluster
    if lat.boundary == "toroidal":
        return np.arange(surv.size)
    ok = ((surv.rows > depth) & (surv.rows <= lat.rows - depth)
          & (surv.cols > depth) & (surv.cols <= lat.cols - depth))
    return np.flatnonzero(ok)


def check_bulk_identity(lat: ModeLattice, s: float, method: str = "auto", depth: int = 3) -> float:
    """Max bulk deviation between the pipeline and the uncorrected closed form."""
    z, surv = surface_code_state(lat, s, method)
    zc, _ = surface_code_closed_form(lat, s, boundary_corrected=False)
    bulk = bulk_modes(surv, depth)
    diff = abs((z - zc)[bulk][:, bulk]).max() if bulk.size else 0.0
    scale = max(s**2, 1.0)
    if diff > BULK_TOL * scale:
        raise NumericalAssertionError(f"bulk mismatch {diff:.3e} between pipeline and closed form")
    return float(diff)


# ---------------------------------------------------------------------------
# nullifiers


@dataclass(frozen=True)
class NullifierSet:
    """Rows H with eta_k = sum_j H[k, j] r_j over r = (q..., p...).

    ``labels`` names the modes behind the columns.
    """

    H: np.ndarray
    labels: np.ndarray
    vacuous_steps: tuple[int, ...] = field(default=())

    @property
    def modes(self) -> int:
        return len(self.labels)

    def rank(self, tol: float = 1e-9) -> int:
        if self.H.size == 0:
            return 0
        sv = np.linalg.svd(self.H, compute_uv=False)
        return int((sv > tol * sv[0]).sum())


def nullifiers_from_graph(z: np.ndarray, labels: Sequence[int] | None = None) -> NullifierSet:
    """Rows of p - Z q, the nullifiers of the state with adjacency Z."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    h = np.hstack([-z, np.eye(n)])
    labels = np.arange(n) if labels is None else np.asarray(labels)
    return NullifierSet(h, labels)


def cluster_nullifiers(lat: ModeLattice, s: float | None = None) -> NullifierSet:
    """Cluster nullifiers (s/sqrt 2)[q_j / s^2 + i(p_j - sum_k q_k)].

    ``s=None`` (or infinity) gives the ideal form p_j - sum_k q_k.
    """
    a = lat.adjacency().toarray()
    n = lat.size
    if s is None or np.isinf(s):
        return NullifierSet(np.hstack([-a, np.eye(n)]).astype(complex), np.arange(n))
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    pref = s / np.sqrt(2.0)
    h = pref * np.hstack([np.eye(n) / s**2 - 1j * a, 1j * np.eye(n)])
    return NullifierSet(h, np.arange(n))


def reduce_nullifiers(nset: NullifierSet, pattern: MeasurementPattern) -> NullifierSet:
    """Three-step reduction: isolate the conjugate, substitute 0, drop its row.

    The pivot is the last row that carries the conjugate with a coefficient at
    least half the largest one.  If no row carries the conjugate the step only
    substitutes the outcome; such steps are recorded in ``vacuous_steps``.
    """
    h = np.array(nset.H, dtype=complex)
    labels = list(int(x) for x in nset.labels)
    vacuous = []
    for label, basis in pattern:
        if label not in labels:
            raise ValidationError(f"mode {label} is not present in the nullifier set")
        n = len(labels)
        j = labels.index(label)
        meas, conj = (j, n + j) if basis == "Q" else (n + j, j)
        col = h[:, conj]
        scale = max(np.abs(h).max(initial=0.0), 1.0)
        carriers = np.flatnonzero(np.abs(col) > ZERO_TOL * scale)
        keep_rows = np.arange(h.shape[0])
        if carriers.size:
            big = np.abs(col[carriers]).max()
            pivot = int(carriers[np.abs(col[carriers]) >= 0.5 * big][-1])
            for r in carriers:
                if r != pivot:
                    h[r] -= (col[r] / h[pivot, conj]) * h[pivot]
            keep_rows = keep_rows[keep_rows != pivot]
        else:
            vacuous.append(label)
        h[:, meas] = 0.0
        h = h[keep_rows]
        h[np.abs(h) < ZERO_TOL * scale] = 0.0
        if np.abs(h[:, conj]).max(initial=0.0) > 1e-9 * scale:
            raise NumericalAssertionError("conjugate quadrature survived the reduction")
        cols = [c for c in range(2 * n) if c not in (j, n + j)]
        h = h[:, cols]
        labels.pop(j)
    out = NullifierSet(h, np.array(labels, dtype=np.int64), tuple(vacuous))
    if labels and out.rank() < len(labels):
        raise DegeneratePatternError(
            f"reduced set has rank {out.rank()} for {len(labels)} surviving modes")
    return out


def commutator_table(nset: NullifierSet) -> np.ndarray:
    """[eta_k, eta_l^dagger] = i H Omega H^dagger."""
    return 1j * nset.H @ omega(nset.modes) @ nset.H.conj().T


def mutual_commutators(nset: NullifierSet) -> np.ndarray:
    """[eta_k, eta_l] = i H Omega H^T; vanishes for a valid nullifier set."""
    return 1j * nset.H @ omega(nset.modes) @ nset.H.T


def annihilation_residual(nset: NullifierSet, gamma: np.ndarray) -> np.ndarray:
    """<eta_k^dagger eta_k> = conj(h) (Gamma + i Omega / 2) h^T for every row."""
    m = gamma + 0.5j * omega(nset.modes)
    return np.einsum("ki,ij,kj->k", nset.H.conj(), m, nset.H).real


def in_row_space(rows: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, float]:
    """Express ``rows`` in the row space of ``basis``; return coefficients and residual."""
    coef, *_ = np.linalg.lstsq(basis.T, rows.T, rcond=None)
    resid = np.abs(coef.T @ basis - rows).max(initial=0.0)
    return coef.T, float(resid)


# ---------------------------------------------------------------------------
# the code on the n x m torus


def commutator_w(d: float, s: float) -> float:
    """Vertex commutator [a_v, a_v'^dagger] at code distance d."""
    s4 = s**4
    table = {0.0: 1.0, 1.0: (1 + 8 * s4) / (4 * (1 + 5 * s4)),
             round(np.sqrt(2.0), 9): s4 / (2 * (1 + 5 * s4)), 2.0: s4 / (4 * (1 + 5 * s4))}
    return table.get(round(float(d), 9), 0.0)


def commutator_x(d: float) -> float:
    """Face commutator [b_f, b_f'^dagger] at code distance d."""
    return {0.0: 1.0, 1.0: 0.25}.get(round(float(d), 9), 0.0)


@dataclass(frozen=True)
class TorusCode:
    """Code vertices, faces and edge modes of the n x m torus.

    The cluster is the 2n x 2m torus; vertex (a, b) sits at cluster site
    (2a + 1, 2b + 1) and face (a, b) at (2a + 2, 2b + 2).
    """

    n: int
    m: int

    @property
    def cluster(self) -> ModeLattice:
        return ModeLattice(2 * self.n, 2 * self.m, "toroidal")

    def survivors(self) -> SurvivorLattice:
        return surface_code_pattern(self.cluster)[1]

    def distance(self, a: tuple[int, int], b: tuple[int, int]) -> float:
        dx = abs(a[0] - b[0]) % self.n
        dy = abs(a[1] - b[1]) % self.m
        dx, dy = min(dx, self.n - dx), min(dy, self.m - dy)
        return float(np.hypot(dx, dy))

    def cells(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(self.m)]

    def _col(self, surv: SurvivorLattice) -> dict[int, int]:
        return {int(lab): k for k, lab in enumerate(surv.labels)}

    def vertex_edges(self, a: int, b: int) -> list[int]:
        lat = self.cluster
        r, c = 2 * a + 1, 2 * b + 1
        return [lat.index(rr, cc) for rr, cc in lat.neighbors(r, c)]

    def face_edges(self, a: int, b: int) -> list[tuple[int, int]]:
        """Edge labels around a face with sign +1 on rows above/below, -1 left/right."""
        lat = self.cluster
        r, c = 2 * a + 2, 2 * b + 2
        return [(lat.index(r - 1, c), 1), (lat.index(r + 1, c), 1),
                (lat.index(r, c - 1), -1), (lat.index(r, c + 1), -1)]

    def nullifiers(self, s: float) -> tuple[NullifierSet, NullifierSet]:
        """Vertex rows a_v and face rows b_f in the unit-normalized closed form."""
        surv = self.survivors()
        col = self._col(surv)
        n_e = surv.size
        sp = np.sqrt(5 * s**2 + s**-2)
        hv = np.zeros((self.n * self.m, 2 * n_e), dtype=complex)
        hf = np.zeros_like(hv)
        for k, (a, b) in enumerate(self.cells()):
            own = set(self.vertex_edges(a, b))
            row = hv[k]
            for e in own:
                row[col[e]] += 1.0
                row[n_e + col[e]] += 1j / sp**2
            nbrs = [((a + da) % self.n, (b + db) % self.m)
                    for da, db in ((-1, 0), (1, 0), (0, -1), (0, 1))]
            for a2, b2 in nbrs:
                for e in self.vertex_edges(a2, b2):
                    if e not in own:
                        row[col[e]] += s**2 / sp**2
            row *= sp / np.sqrt(8.0)
            frow = hf[k]
            for e, sign in self.face_edges(a, b):
                frow[n_e + col[e]] += sign
                frow[col[e]] += -1j * sign / s**2
            frow *= s / np.sqrt(8.0)
        return NullifierSet(hv, surv.labels), NullifierSet(hf, surv.labels)

    def reduced_nullifiers(self, s: float) -> NullifierSet:
        pattern, _ = surface_code_pattern(self.cluster)
        return reduce_nullifiers(cluster_nullifiers(self.cluster, s), pattern)


@dataclass(frozen=True)
class TorusCommutatorCheck:
    vertex_table: np.ndarray
    face_table: np.ndarray
    cross_max: float
    vertex_error: float
    face_error: float
    span_residual: float

    @property
    def max_error(self) -> float:
        return max(self.vertex_error, self.face_error, self.cross_max, self.span_residual)


def nullifier_commutators(code: TorusCode, s: float) -> TorusCommutatorCheck:
    """Commutators of the reduced torus nullifiers against the w(d) and x(d) tables.

    The closed-form vertex and face rows are rebuilt as combinations of the rows
    produced by :func:`reduce_nullifiers`; the rebuilt rows carry the commutators.
    """
    reduced = code.reduced_nullifiers(s)
    nv, nf = code.nullifiers(s)
    target = np.vstack([nv.H, nf.H])
    coef, resid = in_row_space(target, reduced.H)
    rebuilt = NullifierSet(coef @ reduced.H, reduced.labels)
    table = commutator_table(rebuilt)
    k = nv.H.shape[0]
    cells = code.cells()
    w_exp = np.array([[commutator_w(code.distance(p, q), s) for q in cells] for p in cells])
    x_exp = np.array([[commutator_x(code.distance(p, q)) for q in cells] for p in cells])
    tv, tf = table[:k, :k], table[k:, k:]
    cross = max(np.abs(table[:k, k:]).max(), np.abs(mutual_commutators(rebuilt)).max())
    return TorusCommutatorCheck(tv, tf, float(cross), float(np.abs(tv - w_exp).max()),
                                float(np.abs(tf - x_exp).max()), resid)


def worked_example_rows() -> np.ndarray:
    """Ideal 3 x 3 reduction result over survivors (2, 4, 6, 8), as (q | p) rows.

    eta1 - p1, eta3 - p3, eta7 - p7, eta9 - p9, eta2 + eta8 - eta4 - eta6.
    """
    q = {2: 0, 4: 1, 6: 2, 8: 3}
    rows = np.zeros((5, 8))
    for r, (x, y) in enumerate(((2, 4), (2, 6), (4, 8), (6, 8))):
        rows[r, q[x]] = rows[r, q[y]] = -1.0
    for lab, sign in ((2, 1), (8, 1), (4, -1), (6, -1)):
        rows[4, 4 + q[lab]] = sign
    return rows


def rows_match_up_to_scale(got: np.ndarray, expected: np.ndarray, tol: float = 1e-9) -> bool:
    """Every expected row is a multiple of some row of ``got`` and vice versa."""
    def unit(r: np.ndarray) -> np.ndarray:
        k = np.flatnonzero(np.abs(r) > tol)[0]
        return r / r[k]

    if got.shape != expected.shape:
        return False
    g = [unit(r) for r in got]
    e = [unit(r) for r in expected]
    used = set()
    for row in e:
        hit = next((i for i, x in enumerate(g) if i not in used and np.abs(x - row).max() < tol), None)
        if hit is None:
            return False
        used.add(hit)
    return True


def general_vertex_rows(lat: ModeLattice, s: float) -> NullifierSet:
    """Vertex nullifiers for any (planar or toroidal) code, unit normalized.

    With s_v^2 = V s^2 + s^-2 for a vertex of valence V, an incident edge
    carries (1 + k s^2 / s_v^2) q + i p / s_v^2, where k counts the other
    vertices on that edge, and every edge of an adjacent vertex that does not
    touch v carries s^2 / s_v^2 q.  This is sum_{e in v} (U q + i p)_e / s_v^2.
    """
    if s <= 0:
        raise ValidationError("squeezing must be positive")
    _, surv = surface_code_pattern(lat)
    b = vertex_incidence(surv)
    u = (s**2 * (b.T @ b) + s**-2 * sparse.identity(surv.size)).tocsr()
    sv2 = s**2 * np.asarray(b.sum(axis=1)).ravel() + s**-2
    hq = (b @ u).toarray() / sv2[:, None]
    hp = 1j * b.toarray() / sv2[:, None]
    h = np.hstack([hq, hp])
    norm = np.sqrt(np.einsum("ki,ki->k", hq, b.toarray()) * 2.0 / sv2)
    return NullifierSet(h / norm[:, None], surv.labels)


def survivors_sharing_vertex(surv: SurvivorLattice) -> list[tuple[int, int]]:
    """Pairs of survivor positions that share a code vertex."""
    b = vertex_incidence(surv).tolil()
    pairs = set()
    for cols in b.rows:
        for x, y in combinations(sorted(cols), 2):
            pairs.add((x, y))
    return sorted(pairs)
