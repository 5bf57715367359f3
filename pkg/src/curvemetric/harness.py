"""Experiment orchestration: run the learn-and-compare pipeline over a
parameter grid, persist results as CSV, and aggregate outperformance
statistics against the conventional baseline (a = 1, bending 0.5).

Test-set R^2 for each candidate metric is computed with a refit on the train
split under that metric: transform spaces differ across a, so coefficients
cannot be reused. Failed grid cells become first-class records (the failure
region is part of the result), and never abort a sweep.

runs.csv contains only deterministic columns so that identical grids and
seeds reproduce it byte for byte; wall-clock timings stay on the in-memory
records and the service responses.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .errors import CurveMetricError, EmptyInput
from .gradient import RegressionProblem, evaluate_r2
from .learner import LearnerConfig, LearnResult, learn_a
from .synthetic import SweepGrid, Trajectory, make_trajectory

SRV_A = 1.0

RUNS_CSV_COLUMNS = (
    "a_true", "T", "n_s", "sigma", "seed",
    "a_star", "abs_a_error", "r2_test_astar", "r2_test_srv",
    "iterations", "converged", "error",
)

SUMMARY_CSV_COLUMNS = (
    "n_s", "sigma", "n_runs", "n_failed", "frac_astar_ge_srv", "median_abs_a_error",
)


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one grid cell; numeric fields are None when the run failed."""

    a_true: float
    T: int
    n_s: int
    sigma: float
    seed: int
    a_star: float | None = None
    abs_a_error: float | None = None
    r2_test_astar: float | None = None
    r2_test_srv: float | None = None
    iterations: int | None = None
    converged: bool | None = None
    wall_time_ms: float | None = None
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))  # plain-float repr even for numpy scalars
    return str(value)


def _csv_line(cells) -> str:
    # minimal quoting via the csv module (error messages may contain commas)
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerow(cells)
    return buffer.getvalue()


def _record_line(record: RunRecord) -> str:
    return _csv_line(_fmt(getattr(record, col)) for col in RUNS_CSV_COLUMNS)


def records_to_csv(records: Iterable[RunRecord]) -> str:
    return _csv_line(RUNS_CSV_COLUMNS) + "".join(_record_line(r) for r in records)


def _parse_cell(column: str, text: str):
    if text == "":
        return None
    if column in ("T", "n_s", "seed", "iterations"):
        return int(text)
    if column == "converged":
        return text == "true"
    if column == "error":
        return text
    return float(text)


def records_from_csv(text: str) -> list[RunRecord]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or rows[0] != list(RUNS_CSV_COLUMNS):
        raise EmptyInput("not a runs.csv file (missing or wrong header)")
    records = []
    for cells in rows[1:]:
        kwargs = {col: _parse_cell(col, cell) for col, cell in zip(RUNS_CSV_COLUMNS, cells)}
        kwargs["error"] = kwargs.get("error") or ""
        records.append(RunRecord(**kwargs))
    return records


def r2_on_test_split(trajectory: Trajectory, a: float) -> float:
    """R^2 on the test split after refitting the train split under metric a."""
    problem = RegressionProblem.from_trajectory(trajectory, eval_split="test")
    return evaluate_r2(problem, a)


def evaluate_against_srv(trajectory: Trajectory,
                         config: LearnerConfig | None = None) -> tuple[LearnResult, float, float]:
    """Learn a*, then score the test split under both a* and the baseline."""
    result = learn_a(trajectory, config)
    return (result, r2_on_test_split(trajectory, result.a_star),
            r2_on_test_split(trajectory, SRV_A))


def run_single(a_true: float, T: int, n_s: int, sigma: float, seed: int,
               config: LearnerConfig | None = None) -> RunRecord:
    """Synthesize one trajectory, learn a*, and compare against the baseline.

    Pipeline errors are folded into a failed record rather than raised.
    """
    started = time.perf_counter()
    try:
        trajectory = make_trajectory(a_true, T, n_s, sigma, seed)
        result, r2_astar, r2_srv = evaluate_against_srv(trajectory, config)
    except CurveMetricError as exc:
        return RunRecord(
            a_true=a_true, T=T, n_s=n_s, sigma=sigma, seed=seed,
            wall_time_ms=(time.perf_counter() - started) * 1e3,
            error=f"{type(exc).__name__}: {exc}",
        )
    return RunRecord(
        a_true=a_true, T=T, n_s=n_s, sigma=sigma, seed=seed,
        a_star=float(result.a_star),
        abs_a_error=float(abs(result.a_star - a_true)),
        r2_test_astar=float(r2_astar),
        r2_test_srv=float(r2_srv),
        iterations=result.iterations,
        converged=result.converged,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
    )


def _run_cell(cell: tuple[float, int, int, float, int]) -> RunRecord:
    return run_single(*cell)


def run_sweep(grid: SweepGrid, parallelism: int = 1, out_dir=None) -> list[RunRecord]:
    """Run every grid cell; results are ordered by parameters regardless of
    execution order. With ``out_dir`` set, runs.csv is written incrementally
    as cells finish, then summary.csv and config.json alongside it.
    """
    cells = grid.cells()
    out_path = Path(out_dir) if out_dir is not None else None
    runs_file = None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
        runs_file = (out_path / "runs.csv").open("w")
        runs_file.write(_csv_line(RUNS_CSV_COLUMNS))

    records: list[RunRecord] = []
    try:
        if parallelism > 1 and len(cells) > 1:
            with ProcessPoolExecutor(max_workers=parallelism) as executor:
                results = executor.map(_run_cell, cells)
                for record in results:
                    records.append(record)
                    if runs_file is not None:
                        runs_file.write(_record_line(record))
                        runs_file.flush()
        else:
            for cell in cells:
                record = _run_cell(cell)
                records.append(record)
                if runs_file is not None:
                    runs_file.write(_record_line(record))
                    runs_file.flush()
    finally:
        if runs_file is not None:
            runs_file.close()

    if out_path is not None:
        (out_path / "summary.csv").write_text(summary_to_csv(summarize(records)))
        config = {"grid": grid.to_json_dict(), "parallelism": parallelism,
                  "version": __version__}
        (out_path / "config.json").write_text(json.dumps(config, indent=2))
    return records


@dataclass(frozen=True)
class SummaryRow:
    n_s: int
    sigma: float
    n_runs: int
    n_failed: int
    frac_astar_ge_srv: float | None
    median_abs_a_error: float | None


def summarize(records: Sequence[RunRecord]) -> list[SummaryRow]:
    """Per-(n_s, sigma) outperformance fraction and median |a* - a_true|."""
    if not records:
        raise EmptyInput("no records to summarize")
    keys = sorted({(r.n_s, r.sigma) for r in records})
    rows = []
    for n_s, sigma in keys:
        group = [r for r in records if (r.n_s, r.sigma) == (n_s, sigma)]
        ok = [r for r in group if not r.failed]
        frac = median = None
        if ok:
            wins = sum(1 for r in ok if r.r2_test_astar >= r.r2_test_srv)
            frac = wins / len(ok)
            median = float(np.median([r.abs_a_error for r in ok]))
        rows.append(SummaryRow(n_s=n_s, sigma=sigma, n_runs=len(group),
                               n_failed=len(group) - len(ok),
                               frac_astar_ge_srv=frac, median_abs_a_error=median))
    return rows


def summary_to_csv(rows: Sequence[SummaryRow]) -> str:
    lines = [_csv_line(SUMMARY_CSV_COLUMNS)]
    lines += [_csv_line(_fmt(getattr(row, col)) for col in SUMMARY_CSV_COLUMNS)
              for row in rows]
    return "".join(lines)


def compare(trajectory: Trajectory, config: LearnerConfig | None = None) -> dict:
    """Single-trajectory report: learned a* versus the baseline on the test split."""
    result, r2_astar, r2_srv = evaluate_against_srv(trajectory, config)
    return {
        "a_true": trajectory.a_true,
        "a_star": result.a_star,
        "abs_a_error": (abs(result.a_star - trajectory.a_true)
                        if trajectory.a_true is not None else None),
        "r2_val_astar": result.r2_val_history[-1][1],
        "r2_test_astar": r2_astar,
        "r2_test_srv": r2_srv,
        "converged": result.converged,
        "iterations": result.iterations,
    }


# 0.05 to 2.00 in steps of 0.05; contains the baseline a = 1.0 exactly
SCAN_GRID = tuple(float(x) for x in np.round(np.arange(1, 41) * 0.05, 10))


def dense_scan(trajectory: Trajectory, grid=SCAN_GRID) -> list[tuple[float, float, float]]:
    """Validation and test R^2 at every a on the grid (for --scan-dump)."""
    problem_val = RegressionProblem.from_trajectory(trajectory, eval_split="val")
    problem_test = RegressionProblem.from_trajectory(trajectory, eval_split="test")
    return [(float(a), evaluate_r2(problem_val, a), evaluate_r2(problem_test, a))
            for a in grid]


def scan_to_csv(rows) -> str:
    lines = ["a,r2_val,r2_test"]
    lines += [f"{_fmt(a)},{_fmt(rv)},{_fmt(rt)}" for a, rv, rt in rows]
    return "\n".join(lines) + "\n"
