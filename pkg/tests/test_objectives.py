import numpy as np
import pytest

from cospar import (
    DegenerateObjectiveError,
    KernelParams,
    ObjectiveParseError,
    ObjectiveTable,
    build_action_grid,
    load_objective_csv,
    normalize_objective,
    sample_gp_objective,
    write_objective_csv,
)
from cospar.presets import bundled_cot_curve_path


def test_gp_sample_shapes_and_seeding():
    space = build_action_grid([(0, 1, 30), (0, 1, 30)])
    kernel = KernelParams((0.15, 0.15), 1.0, 1e-6, 0.01)
    a = sample_gp_objective(space, kernel, np.random.default_rng(0))
    b = sample_gp_objective(space, kernel, np.random.default_rng(0))
    c = sample_gp_objective(space, kernel, np.random.default_rng(1))
    assert a.values.shape == (900,)
    np.testing.assert_array_equal(a.values, b.values)
    assert np.max(np.abs(a.values - c.values)) > 0


def test_gp_sample_vanishing_signal():
    space = build_action_grid([(0, 1, 10)])
    kernel = KernelParams((0.3,), 1e-30, 1e-32, 0.01)
    table = sample_gp_objective(space, kernel, np.random.default_rng(2))
    assert np.max(np.abs(table.values)) < 1e-12


def test_round_trip_identity(tmp_path):
    space = build_action_grid([(0.0, 1.0, 4), (2.0, 3.0, 3)])
    table = ObjectiveTable(space, np.linspace(-1.3, 2.7, 12))
    path = tmp_path / "obj.csv"
    write_objective_csv(table, path, orientation="utility")
    assert load_objective_csv(path) == table


def test_cost_orientation_negates(tmp_path):
    space = build_action_grid([(0.0, 1.0, 3)])
    table = ObjectiveTable(space, np.array([1.0, 2.0, 3.0]))
    path = tmp_path / "cost.csv"
    write_objective_csv(table, path, orientation="cost")
    text = path.read_text()
    assert text.startswith("# orientation: cost")
    assert "-1.0" in text  # costs on disk are negated utilities
    assert load_objective_csv(path) == table


def test_bundled_curve_loads_as_utilities():
    table = load_objective_csv(bundled_cot_curve_path())
    assert table.space.size == 15
    assert table.space.dims[0].lower == 0.08
    assert table.space.dims[0].upper == 0.18
    # cost curve: utilities are negative, best step length strictly inside
    assert np.all(table.values < 0)
    assert 0 < table.argmax() < 14


def test_missing_grid_point_rejected(tmp_path):
    space = build_action_grid([(0.0, 1.0, 3), (0.0, 1.0, 2)])
    table = ObjectiveTable(space, np.arange(6.0))
    path = tmp_path / "obj.csv"
    write_objective_csv(table, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ObjectiveParseError, match="incomplete grid"):
        load_objective_csv(path)


def test_duplicate_point_rejected(tmp_path):
    space = build_action_grid([(0.0, 1.0, 3)])
    table = ObjectiveTable(space, np.arange(3.0))
    path = tmp_path / "obj.csv"
    write_objective_csv(table, path)
    lines = path.read_text().splitlines()
    lines.append(lines[-1])
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ObjectiveParseError, match="duplicate"):
        load_objective_csv(path)


def test_non_numeric_entry_names_row(tmp_path):
    path = tmp_path / "obj.csv"
    path.write_text(
        "# orientation: utility\ndim_0,value\n0.0,1.0\n0.5,oops\n1.0,2.0\n"
    )
    with pytest.raises(ObjectiveParseError, match="row 4"):
        load_objective_csv(path)


def test_missing_orientation_rejected(tmp_path):
    path = tmp_path / "obj.csv"
    path.write_text("dim_0,value\n0.0,1.0\n1.0,2.0\n")
    with pytest.raises(ObjectiveParseError, match="orientation"):
        load_objective_csv(path)


def test_uneven_spacing_rejected(tmp_path):
    path = tmp_path / "obj.csv"
    path.write_text(
        "# orientation: utility\ndim_0,value\n0.0,1.0\n0.4,2.0\n1.0,3.0\n"
    )
    with pytest.raises(ObjectiveParseError, match="equally spaced"):
        load_objective_csv(path)


def test_normalize_basic():
    space = build_action_grid([(0.0, 1.0, 3)])
    table = ObjectiveTable(space, np.array([2.0, 4.0, 6.0]))
    normalized = normalize_objective(table)
    np.testing.assert_array_equal(normalized.values, [0.0, 0.5, 1.0])


def test_normalize_identity_when_already_unit():
    space = build_action_grid([(0.0, 1.0, 3)])
    table = ObjectiveTable(space, np.array([0.0, 0.25, 1.0]))
    np.testing.assert_array_equal(normalize_objective(table).values, table.values)


def test_normalize_constant_rejected():
    space = build_action_grid([(0.0, 1.0, 3)])
    with pytest.raises(DegenerateObjectiveError):
        normalize_objective(ObjectiveTable(space, np.full(3, 7.0)))
