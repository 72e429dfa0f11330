"""Hypothesis properties for the invariants each module promises."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cvtopo import graph as gc
from cvtopo.noise import measure_covariance
from cvtopo.errors import UnphysicalError
from cvtopo.polymer import OscillatorPairConfig, pair_entropy, sigma_polymer_closed
from cvtopo.selftest import random_circuit, random_covariance, random_pure, run_circuit_both_ways
from cvtopo.symplectic import (
    apply_symplectic,
    complement,
    direct_sum,
    entropy,
    random_symplectic,
    region_entropy,
    symplectic_spectrum,
)
from cvtopo.topo import RegionGeometry, kp_regions, lw_regions, tee_kp, tmi
from cvtopo.torus import check_mode_matrices

seeds = st.integers(0, 2**32 - 1)


@given(seed=seeds, n=st.integers(1, 5))
def test_spectrum_symplectic_invariance(seed, n):
    rng = np.random.default_rng(seed)
    gamma = random_covariance(n, rng)
    moved = apply_symplectic(gamma, random_symplectic(n, rng))
    a, b = symplectic_spectrum(gamma).values, symplectic_spectrum(moved).values
    assert np.allclose(a, b, rtol=1e-8, atol=1e-10)


@given(seed=seeds, n=st.integers(1, 3), m=st.integers(1, 3))
def test_entropy_additive(seed, n, m):
    rng = np.random.default_rng(seed)
    a, b = random_covariance(n, rng), random_covariance(m, rng)
    total = entropy(symplectic_spectrum(direct_sum(a, b)))
    assert total == pytest.approx(entropy(symplectic_spectrum(a)) + entropy(symplectic_spectrum(b)),
                                  abs=1e-9)


@given(seed=seeds, n=st.integers(2, 6), data=st.data())
def test_pure_state_complement(seed, n, data):
    gamma = random_pure(n, np.random.default_rng(seed))
    region = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n - 1, unique=True))
    assert region_entropy(gamma, region) == pytest.approx(
        region_entropy(gamma, complement(region, n)), abs=1e-8)


@given(seed=seeds, n=st.integers(1, 6), depth=st.integers(1, 15))
def test_graph_and_symplectic_routes_agree(seed, n, depth):
    gates = random_circuit(n, depth, np.random.default_rng(seed))
    graph_cov, sym_cov = run_circuit_both_ways(n, gates)
    assert np.abs(graph_cov - sym_cov).max() <= 1e-9 * max(np.abs(sym_cov).max(), 1.0)


@given(seed=seeds, n=st.integers(2, 6), data=st.data())
def test_homodyne_routes_agree(seed, n, data):
    rng = np.random.default_rng(seed)
    gates = random_circuit(n, 10, rng)
    g = gc.vacua_graph(n)
    for gate in gates:
        if gate[0] == "squeeze":
            g = gc.squeeze(g, gate[1], gate[2])
        elif gate[0] == "phase":
            g = gc.phase_shift(g, gate[1], gate[2])
        else:
            g = gc.controlled_z(g, *gate[1:])
    j = data.draw(st.integers(0, n - 1))
    basis = data.draw(st.sampled_from(["Q", "P"]))
    after = gc.measure_q(g, j) if basis == "Q" else gc.measure_p(g, j)
    got = measure_covariance(gc.graph_to_covariance(g), j, basis)
    ref = gc.graph_to_covariance(after)
    assert np.abs(got - ref).max() <= 1e-8 * max(np.abs(ref).max(), 1.0)


@given(seed=seeds, n=st.integers(4, 7))
def test_tmi_on_pure_equals_tee(seed, n):
    rng = np.random.default_rng(seed)
    gamma = random_pure(n, rng)
    a, b, c = [0], [1], list(range(2, n - 1))
    assert tmi(gamma, a, b, c) == pytest.approx(tee_kp(gamma, a, b, c), abs=1e-8)


GRID = np.array([(u, v) for u in range(40) for v in range(40)], dtype=float)
GEOM = RegionGeometry(GRID, np.array([0.0, 0.0]), np.array([39.0, 39.0]))


@given(r=st.floats(2.0, 12.0), dx=st.floats(-3, 3), dy=st.floats(-3, 3),
       start=st.floats(0, 2 * np.pi))
def test_kp_sectors_disjoint_and_cover_disk(r, dx, dy, start):
    center = GEOM.center + [dx, dy]
    a, b, c = kp_regions(GEOM, center, r, start=start)
    assert not (set(a) & set(b) or set(b) & set(c) or set(a) & set(c))
    disk = np.flatnonzero(np.hypot(*(GRID - center).T) <= r)
    assert sorted(np.concatenate([a, b, c])) == sorted(disk)


@given(r_in=st.floats(2.0, 7.0), width=st.floats(2.0, 6.0), cut=st.floats(0.3, 2.0),
       dx=st.floats(-2, 2))
def test_lw_area_identity(r_in, width, cut, dx):
    a, b, c, d = lw_regions(GEOM, GEOM.center + [dx, 0.0], r_in, r_in + width, cut)
    assert len(a) - len(b) == len(c) - len(d)


@given(alpha=st.floats(1.05, 3.0), r=st.floats(0.005, 0.11))
def test_polymer_entropy_below_schrodinger(alpha, r):
    # r sqrt(alpha) is the stiffer mode's mu / d and must stay below 0.2
    try:
        res = pair_entropy(OscillatorPairConfig.from_alpha(alpha, r))
    except UnphysicalError:
        # outside the Gaussian regime: weak coupling, where the drop exceeds sigma - 1/2
        assert sigma_polymer_closed(alpha, r) < 0.5 + 1e-3
        return
    assert res.s_poly <= res.s_schr


@given(sigma=st.floats(0.5, 1e8))
def test_entropy_monotone(sigma):
    assert entropy([sigma * 1.01 + 0.01]) >= entropy([sigma]) >= 0.0


@given(n=st.sampled_from([3, 5, 7, 9]), m=st.sampled_from([3, 5, 7, 9]), s=st.floats(0.3, 6.0))
def test_torus_tables(n, m, s):
    assert check_mode_matrices(n, m, s) < 1e-9
