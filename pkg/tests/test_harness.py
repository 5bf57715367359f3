import pytest

from curvemetric.errors import EmptyInput
from curvemetric.gradient import RegressionProblem, evaluate_r2
from curvemetric.harness import (
    RunRecord,
    compare,
    dense_scan,
    r2_on_test_split,
    records_from_csv,
    records_to_csv,
    run_single,
    run_sweep,
    scan_to_csv,
    summarize,
    summary_to_csv,
)
from curvemetric.synthetic import SweepGrid, make_trajectory

SMALL_GRID = SweepGrid(a_true_values=(0.5, 1.0), T_values=(20,), ns_values=(30,),
                       sigma_values=(0.0, 0.001), seeds=(0, 1))


def test_run_single_clean_case():
    record = run_single(0.5, 100, 40, 0.0, 0)
    assert not record.failed
    assert record.r2_test_astar >= 0.999
    assert record.r2_test_astar >= record.r2_test_srv
    assert record.abs_a_error <= 0.05
    assert record.converged
    assert record.wall_time_ms > 0


def test_run_single_baseline_case():
    record = run_single(1.0, 100, 40, 0.0, 0)
    assert abs(record.r2_test_astar - record.r2_test_srv) <= 1e-3


def test_run_single_failure_becomes_record():
    record = run_single(0.5, 4, 30, 0.0, 0)
    assert record.failed
    assert "TrajectoryTooShort" in record.error
    assert record.a_star is None


def test_sweep_continues_past_failures():
    grid = SweepGrid(a_true_values=(0.5,), T_values=(4, 20), ns_values=(30,),
                     sigma_values=(0.0,), seeds=(0,))
    records = run_sweep(grid)
    assert len(records) == 2
    assert records[0].failed and not records[1].failed


def test_sweep_deterministic_and_order_stable(tmp_path):
    out1, out2, out3 = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    run_sweep(SMALL_GRID, parallelism=1, out_dir=out1)
    run_sweep(SMALL_GRID, parallelism=1, out_dir=out2)
    run_sweep(SMALL_GRID, parallelism=2, out_dir=out3)
    runs1 = (out1 / "runs.csv").read_bytes()
    assert runs1 == (out2 / "runs.csv").read_bytes()
    assert runs1 == (out3 / "runs.csv").read_bytes()
    assert (out1 / "summary.csv").read_bytes() == (out3 / "summary.csv").read_bytes()
    assert (out1 / "config.json").exists()


def test_sweep_records_sorted_by_parameters():
    records = run_sweep(SMALL_GRID)
    keys = [(r.a_true, r.T, r.n_s, r.sigma, r.seed) for r in records]
    assert keys == sorted(keys)
    assert len(records) == 8


def test_empty_seeds_give_empty_sweep():
    grid = SweepGrid(a_true_values=(0.5,), T_values=(20,), ns_values=(30,),
                     sigma_values=(0.0,), seeds=())
    assert run_sweep(grid) == []


def test_records_csv_roundtrip():
    records = run_sweep(SMALL_GRID)
    text = records_to_csv(records)
    parsed = records_from_csv(text)
    stripped = [
        RunRecord(**{**r.__dict__, "wall_time_ms": None}) for r in records
    ]
    assert parsed == stripped


def test_records_csv_roundtrip_with_failed_record():
    # error messages can contain commas; quoting must keep the row parseable
    failed = run_single(0.5, 4, 30, 0.0, 0)
    assert "," in failed.error
    parsed = records_from_csv(records_to_csv([failed]))
    assert len(parsed) == 1
    assert parsed[0].error == failed.error
    assert parsed[0].failed


def test_reevaluation_consistency():
    # the recorded test R^2 must match an independent recomputation from the
    # regenerated trajectory and the recorded a_star
    record = run_single(0.7, 50, 30, 0.001, 3)
    trajectory = make_trajectory(0.7, 50, 30, 0.001, 3)
    again = evaluate_r2(RegressionProblem.from_trajectory(trajectory, "test"),
                        record.a_star)
    assert record.r2_test_astar == pytest.approx(again, abs=1e-12)
    assert record.r2_test_srv == pytest.approx(r2_on_test_split(trajectory, 1.0), abs=1e-12)


def test_summarize_groups_and_fractions():
    records = run_sweep(SMALL_GRID)
    rows = summarize(records)
    assert [(row.n_s, row.sigma) for row in rows] == [(30, 0.0), (30, 0.001)]
    clean = rows[0]
    assert clean.n_runs == 4 and clean.n_failed == 0
    assert clean.frac_astar_ge_srv == 1.0
    assert clean.median_abs_a_error < 0.05

    csv_text = summary_to_csv(rows)
    assert csv_text.splitlines()[0] == "n_s,sigma,n_runs,n_failed,frac_astar_ge_srv,median_abs_a_error"


def test_summarize_empty_raises():
    with pytest.raises(EmptyInput):
        summarize([])


def test_summarize_counts_failures():
    failed = RunRecord(a_true=0.5, T=4, n_s=30, sigma=0.0, seed=0, error="TrajectoryTooShort: x")
    rows = summarize([failed])
    assert rows[0].n_failed == 1
    assert rows[0].frac_astar_ge_srv is None


def test_compare_report():
    trajectory = make_trajectory(0.5, 60, 30, 0.0, 2)
    report = compare(trajectory)
    assert report["a_true"] == 0.5
    assert abs(report["a_star"] - 0.5) <= 0.05
    assert report["r2_test_astar"] >= report["r2_test_srv"]
    assert report["r2_val_astar"] >= 0.999
    assert set(report) == {"a_true", "a_star", "abs_a_error", "r2_val_astar",
                           "r2_test_astar", "r2_test_srv", "converged", "iterations"}


def test_runs_csv_excludes_timing_column():
    text = records_to_csv(run_sweep(SMALL_GRID))
    assert "wall_time" not in text.splitlines()[0]


def test_full_grid_sweep_converges_on_clean_cells():
    # the complete 5 x 4 x 3 x 3 grid with one seed; at least 95 percent of
    # the noiseless cells must converge (noisy cells may or may not)
    grid = SweepGrid(a_true_values=(0.2, 0.5, 0.7, 0.9, 1.0),
                     T_values=(20, 50, 100, 200),
                     ns_values=(30, 50, 100),
                     sigma_values=(0.0, 0.001, 0.01),
                     seeds=(0,))
    records = run_sweep(grid, parallelism=4)
    assert len(records) == 180
    assert all(not r.failed for r in records)
    clean = [r for r in records if r.sigma == 0.0]
    assert len(clean) == 60
    converged = sum(1 for r in clean if r.converged)
    assert converged / len(clean) >= 0.95
    # clean-cell recovery is tight across the whole grid
    assert max(r.abs_a_error for r in clean) <= 0.05


def test_dense_scan_baseline_column_matches_srv():
    # the a = 1.0 row of the scan must agree with the baseline test R^2
    trajectory = make_trajectory(0.6, 40, 30, 0.001, 8)
    rows = dense_scan(trajectory)
    at_one = [row for row in rows if row[0] == 1.0]
    assert len(at_one) == 1
    assert at_one[0][2] == r2_on_test_split(trajectory, 1.0)
    report = compare(trajectory)
    assert at_one[0][2] == report["r2_test_srv"]

    csv_text = scan_to_csv(rows)
    assert csv_text.splitlines()[0] == "a,r2_val,r2_test"
    assert len(csv_text.splitlines()) == len(rows) + 1
