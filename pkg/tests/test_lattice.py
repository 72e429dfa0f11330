import numpy as np
import pytest

from cvtopo import graph as gc
from cvtopo.errors import ValidationError
from cvtopo.lattice import (
    MeasurementPattern,
    ModeLattice,
    TorusCode,
    annihilation_residual,
    build_cluster_graph,
    check_bulk_identity,
    cluster_nullifiers,
    commutator_w,
    commutator_x,
    general_vertex_rows,
    in_row_space,
    mutual_commutators,
    nullifier_commutators,
    nullifiers_from_graph,
    reduce_nullifiers,
    rows_match_up_to_scale,
    site_kind,
    surface_code_closed_form,
    surface_code_pattern,
    surface_code_state,
    survivors_sharing_vertex,
    worked_example_rows,
)


def test_site_kinds():
    assert site_kind(1, 1) == "P"
    assert site_kind(2, 2) == "Q"
    assert site_kind(1, 2) == site_kind(2, 1) == "E"


def test_toroidal_index_wraps():
    lat = ModeLattice(4, 4, "toroidal")
    assert lat.index(5, 1) == lat.index(1, 1)
    assert len(lat.neighbors(1, 1)) == 4
    with pytest.raises(ValidationError):
        ModeLattice(4, 4).index(5, 1)


def test_odd_torus_rejected():
    with pytest.raises(ValidationError):
        surface_code_pattern(ModeLattice(5, 4, "toroidal"))


def test_pattern_uniqueness():
    with pytest.raises(ValidationError):
        MeasurementPattern(((1, "P"), (1, "Q")))


def test_survivor_table():
    _, surv = surface_code_pattern(ModeLattice(3, 3))
    assert surv.csv_rows() == ["index,row,col", "0,1,2", "1,2,1", "2,2,3", "3,3,2"]


def test_cluster_pipeline():
    g = build_cluster_graph(ModeLattice(3, 4), 2.0)
    assert g.Z[0, 1] == 1 and g.Z[0, 0] == pytest.approx(0.25j)


@pytest.mark.parametrize("n", [5, 7])
@pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
def test_dense_sparse_and_closed_form_agree(n, s):
    lat = ModeLattice(n, n)
    zd, _ = surface_code_state(lat, s, "dense")
    zs, _ = surface_code_state(lat, s, "sparse")
    zc, _ = surface_code_closed_form(lat, s)
    assert abs(zd - zs).max() < 1e-12
    assert abs(zd - zc).max() < 1e-12


def test_bulk_identity_large():
    assert check_bulk_identity(ModeLattice(41, 41), 2.0) < 1e-10


def test_three_by_three_reduction():
    lat = ModeLattice(3, 3)
    pattern, _ = surface_code_pattern(lat)
    reduced = reduce_nullifiers(cluster_nullifiers(lat), pattern)
    assert rows_match_up_to_scale(reduced.H, worked_example_rows())
    assert reduced.vacuous_steps == (8,)


def test_reduced_nullifiers_annihilate_finite_state():
    lat = ModeLattice(5, 5)
    pattern, _ = surface_code_pattern(lat)
    s = 1.5
    reduced = reduce_nullifiers(cluster_nullifiers(lat, s), pattern)
    z, _ = surface_code_state(lat, s)
    gamma = gc.graph_to_covariance(gc.GraphState(z.toarray()))
    assert np.abs(annihilation_residual(reduced, gamma)).max() < 1e-10
    assert np.abs(mutual_commutators(reduced)).max() < 1e-10


def test_graph_nullifiers_full_rank():
    z, _ = surface_code_state(ModeLattice(5, 5), 1.0)
    nset = nullifiers_from_graph(z.toarray())
    assert nset.rank() == z.shape[0]


@pytest.mark.parametrize("boundary,n", [("planar", 7), ("toroidal", 8)])
def test_general_vertex_rows_in_reduced_span(boundary, n):
    lat = ModeLattice(n, n, boundary)
    pattern, _ = surface_code_pattern(lat)
    s = 2.0
    reduced = reduce_nullifiers(cluster_nullifiers(lat, s), pattern)
    rows = general_vertex_rows(lat, s)
    _, resid = in_row_space(rows.H, reduced.H)
    assert resid < 1e-10


def test_commutator_tables_values():
    # at s = 1: (1 + 8) / 24, 1 / 12, 1 / 24
    assert commutator_w(0.0, 1.0) == 1.0
    assert commutator_w(1.0, 1.0) == pytest.approx(0.375)
    assert commutator_w(np.sqrt(2.0), 1.0) == pytest.approx(1 / 12)
    assert commutator_w(2.0, 1.0) == pytest.approx(1 / 24)
    assert commutator_w(3.0, 1.0) == 0.0
    assert commutator_x(1.0) == 0.25 and commutator_x(2.0) == 0.0


@pytest.mark.parametrize("s", [1.0, 2.0, 5.0])
def test_torus_commutators(s):
    check = nullifier_commutators(TorusCode(5, 5), s)
    assert check.max_error < 1e-9


def test_sharing_pairs_on_3x3():
    _, surv = surface_code_pattern(ModeLattice(3, 3))
    assert survivors_sharing_vertex(surv) == [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_rows_match_detects_difference():
    rows = worked_example_rows()
    other = rows.copy()
    other[0, 0] = 3.0
    assert not rows_match_up_to_scale(other, rows)
    assert rows_match_up_to_scale(-2.0 * rows[::-1], rows)
