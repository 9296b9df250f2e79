import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midmile import conflict
from midmile.errors import ValidationError

coords = st.floats(min_value=0.0, max_value=10.0, allow_nan=False, allow_infinity=False)
position_lists = st.lists(st.tuples(coords, coords), min_size=1, max_size=12)


def test_edge_below_threshold():
    c = conflict.build_interference_matrix([(0, 0), (3.9, 0)], 4.0)
    assert c.entries[0, 1] == 1 and c.entries[1, 0] == 1


def test_no_edge_at_exact_threshold():
    c = conflict.build_interference_matrix([(0, 0), (4.0, 0)], 4.0)
    assert c.entries[0, 1] == 0


def test_single_enb():
    c = conflict.build_interference_matrix([(5, 5)], 4.0)
    assert c.size == 1
    assert c.entries[0, 0] == 0


def test_neighbor_sets_on_path():
    c = conflict.build_interference_matrix([(0, 0), (3, 0), (6, 0)], 4.0)
    assert conflict.neighbor_set(c, 1) == {0, 2}
    assert conflict.neighbor_set(c, 0) == {1}
    assert conflict.neighbor_set(c, 2) == {1}


def test_neighbor_sets_triangle_and_empty():
    tri = conflict.build_interference_matrix([(0, 0), (1, 0), (0.5, 1)], 4.0)
    assert conflict.neighbor_set(tri, 0) == {1, 2}
    far = conflict.build_interference_matrix([(0, 0), (9, 9)], 4.0)
    assert conflict.neighbor_set(far, 0) == set()
    assert conflict.neighbor_set(far, 1) == set()


def test_neighbor_set_index_error():
    c = conflict.build_interference_matrix([(0, 0)], 4.0)
    with pytest.raises(IndexError):
        conflict.neighbor_set(c, 1)


def test_empty_positions_rejected():
    with pytest.raises(ValidationError):
        conflict.build_interference_matrix([], 4.0)


def test_matrix_text_export():
    c = conflict.build_interference_matrix([(0, 0), (3, 0), (6, 0)], 4.0)
    assert conflict.matrix_to_text(c) == "0 1 0\n1 0 1\n0 1 0\n"


@given(position_lists)
@settings(max_examples=150)
def test_symmetric_zero_diagonal(positions):
    c = conflict.build_interference_matrix(positions, 4.0)
    e = c.entries
    assert np.array_equal(e, e.T)
    assert not np.diag(e).any()


@given(position_lists, st.floats(min_value=0.0, max_value=6.0), st.floats(min_value=0.0, max_value=6.0))
@settings(max_examples=100)
def test_threshold_monotonicity(positions, t1, t2):
    lo, hi = sorted((t1, t2))
    e_lo = conflict.build_interference_matrix(positions, lo).entries
    e_hi = conflict.build_interference_matrix(positions, hi).entries
    assert np.all(e_hi >= e_lo)


def test_spaced_grid_is_edgeless():
    positions = [(4.0 * i, 4.0 * j) for i in range(3) for j in range(3)]
    c = conflict.build_interference_matrix(positions, 4.0)
    assert not c.entries.any()
