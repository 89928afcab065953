import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cospar import ConfigurationError, ProtocolError, build_action_grid


def test_step_length_grid_spacing():
    space = build_action_grid([(0.08, 0.18, 15)])
    assert space.size == 15
    diffs = np.diff(space.axes[0])
    np.testing.assert_allclose(diffs, 1.0 / 140.0, rtol=1e-12)
    assert space.axes[0][0] == 0.08
    assert space.axes[0][-1] == 0.18


def test_square_grid_size():
    space = build_action_grid([(0, 1, 30), (0, 1, 30)])
    assert space.size == 900
    assert space.points.shape == (900, 2)


def test_single_point_grid():
    space = build_action_grid([(5, 5, 1)])
    assert space.size == 1
    assert space.points[0, 0] == 5.0


def test_invalid_dims_raise_naming_dimension():
    with pytest.raises(ConfigurationError, match="width"):
        build_action_grid([("width", 0.0, 1.0, 0)])
    with pytest.raises(ConfigurationError, match="width"):
        build_action_grid([("width", 1.0, 0.0, 3)])
    with pytest.raises(ConfigurationError, match="width"):
        build_action_grid([("width", 1.0, 1.0, 3)])


def test_row_major_flattening():
    space = build_action_grid([(0, 1, 2), (0, 1, 3)])
    # last dimension varies fastest
    np.testing.assert_array_equal(space.points[0], [0.0, 0.0])
    np.testing.assert_array_equal(space.points[1], [0.0, 0.5])
    np.testing.assert_array_equal(space.points[3], [1.0, 0.0])
    assert space.multi_index(4) == (1, 1)
    assert space.flat_index((1, 1)) == 4


@given(
    counts=st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3),
    data=st.data(),
)
def test_index_bijection(counts, data):
    space = build_action_grid([(0.0, 1.0 if c > 1 else 0.0, c) for c in counts])
    index = data.draw(st.integers(min_value=0, max_value=space.size - 1))
    assert space.flat_index(space.multi_index(index)) == index


def test_snap_nearest_and_tie_toward_lower_index():
    space = build_action_grid([(0.0, 1.0, 2)])
    assert space.snap([0.5]) == 0  # exact midpoint: lower index wins
    assert space.snap([0.51]) == 1
    assert space.snap([-3.0]) == 0
    assert space.snap([42.0]) == 1


def test_out_of_range_index_rejected():
    space = build_action_grid([(0, 1, 4)])
    with pytest.raises(ProtocolError):
        space.coordinates(4)
    with pytest.raises(ProtocolError):
        space.coordinates(-1)


def test_dims_dict_round_trip():
    space = build_action_grid([("a", 0.08, 0.18, 15), ("b", 0.85, 1.15, 10)])
    from cospar import ActionSpace

    clone = ActionSpace.from_dict_list(space.dims_as_dict())
    assert clone == space
