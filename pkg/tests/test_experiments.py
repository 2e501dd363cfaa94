"""Tests for the Monte Carlo harness and the DOF table."""

import math

import numpy as np
import pytest

from sparsedoa import (
    ArraySpec,
    ExperimentConfig,
    ParameterError,
    dof_table,
    resolve_array,
    rmse,
    sweep_snapshots,
    sweep_snr,
)
from sparsedoa.experiments import REFERENCE_DOF


class TestRmse:
    def test_perfect_estimates(self):
        assert rmse([[1.0, 2.0], [1.0, 2.0]], [1.0, 2.0]) == 0.0

    def test_single_degree_error(self):
        assert rmse([[11.0]], [10.0]) == pytest.approx(1.0)

    def test_two_trials(self):
        est = [[1.0], [math.sqrt(2.0)]]
        assert rmse(est, [0.0]) == pytest.approx(math.sqrt(1.5))

    def test_sorted_pairing(self):
        # order inside a trial must not matter
        assert rmse([[30.0, -30.0]], [-30.0, 30.0]) == 0.0

    def test_empty_estimates_rejected(self):
        with pytest.raises(ParameterError):
            rmse(np.empty((0, 2)), [0.0, 1.0])

    def test_width_mismatch_rejected(self):
        with pytest.raises(ParameterError):
            rmse([[1.0, 2.0]], [1.0])


class TestArraySpec:
    def test_known_designs(self):
        assert resolve_array("secna", {"m": 5, "n": 3}).size == 15
        assert resolve_array("nested", {"n1": 4, "n2": 5}).size == 9
        assert resolve_array("ula", {"count": 8}).size == 8

    def test_unknown_design_rejected(self):
        with pytest.raises(ParameterError):
            resolve_array("mra", {"count": 4})

    def test_missing_parameter_rejected(self):
        with pytest.raises(ParameterError):
            resolve_array("secna", {"m": 5})


class TestExperimentConfig:
    def test_source_angles_uniform(self):
        cfg = ExperimentConfig(arrays=(ArraySpec("ula", {"count": 4}),), q=31)
        angles = cfg.source_angles()
        assert len(angles) == 31
        assert angles[0] == -60.0 and angles[-1] == 60.0
        steps = np.diff(angles)
        assert np.allclose(steps, 4.0)

    def test_single_source_centered(self):
        cfg = ExperimentConfig(arrays=(ArraySpec("ula", {"count": 4}),), q=1)
        assert cfg.source_angles() == (0.0,)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"arrays": (), "q": 2},
            {"arrays": (ArraySpec("ula", {"count": 4}),), "q": 0},
            {"arrays": (ArraySpec("ula", {"count": 4}),), "q": 2, "angle_span": 95.0},
            {"arrays": (ArraySpec("ula", {"count": 4}),), "q": 2, "trials": 0},
            {"arrays": (ArraySpec("ula", {"count": 4}),), "q": 2, "grid_step": 0.0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ParameterError):
            ExperimentConfig(**kwargs)


def small_config(**overrides):
    defaults = dict(
        arrays=(ArraySpec("ula", {"count": 8}),),
        q=2,
        angle_span=30.0,
        sweep_snr_db=(10.0,),
        fixed_snapshots=200,
        trials=2,
        master_seed=7,
        grid_step=0.5,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


class TestSweeps:
    def test_deterministic_reruns(self):
        cfg = small_config()
        a = sweep_snr(cfg)
        b = sweep_snr(cfg)
        assert a.to_csv() == b.to_csv()

    def test_single_point_report_shape(self):
        report = sweep_snr(small_config())
        assert report.sweep_variable == "snr_db"
        assert len(report.rows) == 1
        row = report.rows[0]
        assert row.sweep_value == 10.0
        assert row.trials == 2
        assert row.failures == 0
        assert row.rmse_deg >= 0.0

    def test_rows_cover_all_arrays_and_points(self):
        cfg = small_config(
            arrays=(ArraySpec("ula", {"count": 8}), ArraySpec("nested", {"n1": 2, "n2": 2})),
            sweep_snr_db=(0.0, 10.0),
        )
        report = sweep_snr(cfg)
        assert [r.sweep_value for r in report.rows] == [0.0, 0.0, 10.0, 10.0]
        assert {r.array_tag for r in report.rows} == {
            "ula(count=8)",
            "nested(n1=2, n2=2)",
        }

    def test_snapshot_sweep_matches_snr_sweep_at_shared_point(self):
        cfg_snr = small_config(sweep_snr_db=(20.0,), fixed_snapshots=300)
        cfg_snap = small_config(
            sweep_snr_db=(), sweep_snapshots=(300,), fixed_snr_db=20.0
        )
        row_a = sweep_snr(cfg_snr).rows[0]
        row_b = sweep_snapshots(cfg_snap).rows[0]
        assert row_a.rmse_deg == row_b.rmse_deg
        assert row_a.failures == row_b.failures

    def test_empty_sweep_list_rejected(self):
        with pytest.raises(ParameterError):
            sweep_snapshots(small_config(sweep_snr_db=(), sweep_snapshots=()))

    def test_csv_layout(self):
        report = sweep_snr(small_config())
        lines = report.to_csv().splitlines()
        assert lines[0] == "sweep_value,array,rmse,failures"
        fields = lines[1].split(",")
        assert fields[0] == "10.0"
        assert fields[1] == "ula(count=8)"
        float(fields[2])
        assert fields[3] == "0"

    def test_json_round_trip_fields(self):
        report = sweep_snr(small_config())
        payload = report.to_json_dict()
        assert payload["sweep_variable"] == "snr_db"
        assert payload["config"]["trials"] == 2
        assert payload["rows"][0]["rmse"] == report.rows[0].rmse_deg


class TestDofTable:
    def test_reference_budgets(self):
        table = dof_table([9, 13, 19, 23, 27])
        for row in table.rows:
            ref = REFERENCE_DOF[row.budget]
            assert row.entries["nested"].value == ref["nested"]
            assert row.entries["rsna"].value == ref["rsna"]
            assert row.entries["secna"].value == ref["secna"]

    def test_esna_known_mismatches_flagged(self):
        table = dof_table([9, 13, 19, 23, 27])
        flags = {row.budget: row.entries["esna"].matches_reference for row in table.rows}
        assert flags == {9: False, 13: False, 19: True, 23: True, 27: True}
        values = {row.budget: row.entries["esna"].value for row in table.rows}
        assert values == {9: 109, 13: 211, 19: 427, 23: 609, 27: 823}

    def test_secna_brute_force_equals_closed_form(self):
        for row in dof_table([9, 13, 19]).rows:
            entry = row.entries["secna"]
            assert entry.brute_force == entry.closed_form == entry.value
            assert entry.provenance == "brute-force"

    def test_secna_dominates_other_columns(self):
        for row in dof_table([9, 13, 19, 23, 27]).rows:
            secna = row.entries["secna"].value
            assert all(
                secna >= e.value for name, e in row.entries.items() if name != "secna"
            )

    def test_unknown_budget_has_no_reference_flag(self):
        (row,) = dof_table([11]).rows
        assert row.entries["secna"].matches_reference is None
        assert row.entries["secna"].brute_force == row.entries["secna"].closed_form

    @pytest.mark.parametrize("budgets", [[], [8], [7]])
    def test_invalid_budgets_rejected(self, budgets):
        with pytest.raises(ParameterError):
            dof_table(budgets)
