"""Invariant suite run by ``cvtopo selftest``.

Each check returns a :class:`Check`; none of them raise on failure so the
command can report every line before choosing its exit code.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import graph as gc
from .lattice import (
    ModeLattice,
    check_bulk_identity,
    cluster_nullifiers,
    reduce_nullifiers,
    rows_match_up_to_scale,
    surface_code_pattern,
    worked_example_rows,
)
from .symplectic import (
    apply_symplectic,
    complement,
    direct_sum,
    entropy,
    random_symplectic,
    region_entropy,
    symplectic_spectrum,
)
from .torus import check_mode_matrices

SPECTRUM_TOL = 1e-8
ENTROPY_TOL = 1e-8
CIRCUIT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_covariance(n: int, rng: np.random.Generator) -> np.ndarray:
    """A thermal product state pushed through a random symplectic."""
    nu = 0.5 + rng.exponential(1.0, size=n)
    base = np.diag(np.concatenate([nu, nu]))
    return apply_symplectic(base, random_symplectic(n, rng))


def random_pure(n: int, rng: np.random.Generator) -> np.ndarray:
    return apply_symplectic(0.5 * np.eye(2 * n), random_symplectic(n, rng))


def check_spectrum_invariance(rng: np.random.Generator, trials: int = 100,
                              sizes=(2, 3, 5)) -> tuple[bool, str]:
    worst = 0.0
    for n in sizes:
        gamma = random_covariance(n, rng)
        ref = symplectic_spectrum(gamma).values
        for _ in range(trials):
            moved = apply_symplectic(gamma, random_symplectic(n, rng))
            err = np.abs(symplectic_spectrum(moved).values - ref).max() / ref.max()
            worst = max(worst, float(err))
    return worst < SPECTRUM_TOL, f"max relative deviation {worst:.2e} over {trials} transforms per N"


def check_additivity(rng: np.random.Generator, trials: int = 20) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(trials):
        a, b = random_covariance(int(rng.integers(1, 4)), rng), random_covariance(int(rng.integers(1, 4)), rng)
        ent = entropy(symplectic_spectrum(direct_sum(a, b)))
        parts = entropy(symplectic_spectrum(a)) + entropy(symplectic_spectrum(b))
        worst = max(worst, abs(ent - parts))
    return worst < ENTROPY_TOL, f"max |S(A+B) - S(A) - S(B)| = {worst:.2e}"


def check_complement(rng: np.random.Generator, trials: int = 20) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        gamma = random_pure(n, rng)
        k = int(rng.integers(1, n))
        region = np.sort(rng.choice(n, size=k, replace=False))
        diff = abs(region_entropy(gamma, region) - region_entropy(gamma, complement(region, n)))
        worst = max(worst, diff)
    return worst < ENTROPY_TOL, f"max |S(A) - S(A^c)| = {worst:.2e}"


def random_circuit(n: int, depth: int, rng: np.random.Generator):
    """Gate list [(kind, args)] avoiding transforms singular on the graph route."""
    gates = []
    for _ in range(depth):
        kind = rng.choice(["squeeze", "phase", "cz"])
        if kind == "squeeze":
            gates.append(("squeeze", int(rng.integers(n)), float(np.exp(rng.uniform(-1, 1)))))
        elif kind == "phase":
            gates.append(("phase", int(rng.integers(n)), float(rng.uniform(-1.2, 1.2))))
        elif n > 1:
            j, k = rng.choice(n, size=2, replace=False)
            gates.append(("cz", int(j), int(k), float(rng.uniform(-1, 1))))
    return gates


def run_circuit_both_ways(n: int, gates) -> tuple[np.ndarray, np.ndarray]:
    g = gc.vacua_graph(n)
    y = np.eye(2 * n)
    for gate in gates:
        if gate[0] == "squeeze":
            _, j, s = gate
            g = gc.squeeze(g, j, s)
            step = gc.single_mode_symplectic(n, j, s, 0.0, 0.0, 1 / s)
        elif gate[0] == "phase":
            _, j, th = gate
            g = gc.phase_shift(g, j, th)
            c, s = np.cos(th), np.sin(th)
            step = gc.single_mode_symplectic(n, j, c, s, -s, c)
        else:
            _, j, k, w = gate
            g = gc.controlled_z(g, j, k, w)
            step = gc.controlled_z_symplectic(n, j, k, w)
        y = step @ y
    return gc.graph_to_covariance(g), 0.5 * y @ y.T


def check_dual_route(rng: np.random.Generator, trials: int = 50) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        graph_cov, sym_cov = run_circuit_both_ways(n, random_circuit(n, 12, rng))
        worst = max(worst, float(np.abs(graph_cov - sym_cov).max() / max(np.abs(sym_cov).max(), 1.0)))
    return worst < CIRCUIT_TOL, f"max relative deviation {worst:.2e} on {trials} circuits"


def check_worked_reduction() -> tuple[bool, str]:
    lat = ModeLattice(3, 3)
    pattern, _ = surface_code_pattern(lat)
    reduced = reduce_nullifiers(cluster_nullifiers(lat), pattern)
    ok = rows_match_up_to_scale(reduced.H, worked_example_rows())
    return ok, f"{reduced.H.shape[0]} rows, match {ok}"


def check_pipeline() -> tuple[bool, str]:
    worst = max(check_bulk_identity(ModeLattice(n, n), s) for n in (7, 12) for s in (0.5, 2.0))
    return worst < 1e-10, f"max bulk deviation {worst:.2e}"


def check_mode_tables() -> tuple[bool, str]:
    worst = max(check_mode_matrices(n, m, s) for n in (3, 5, 7) for m in (3, 5, 7) for s in (1.0, 2.0, 5.0))
    return worst < 1e-9, f"max table deviation {worst:.2e}"


def run_selftest(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("spectrum invariance", lambda: check_spectrum_invariance(rng)),
        ("entropy additivity", lambda: check_additivity(rng)),
        ("pure-state complement", lambda: check_complement(rng)),
        ("graph vs symplectic circuits", lambda: check_dual_route(rng)),
        ("3x3 nullifier reduction", check_worked_reduction),
        ("pipeline vs closed form", check_pipeline),
        ("torus mode tables", check_mode_tables),
    ]
    out = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check here, not a traceback
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail, time.perf_counter() - t0))
    return out
