"""Pydantic request/response models for the curvemetric service.

TrajectoryModel mirrors the trajectory JSON file format exactly, so files
written by the CLI and request bodies are interchangeable.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..synthetic import SweepGrid, Trajectory


class TrajectoryModel(BaseModel):
    a_true: float | None = None
    sigma: float = 0.0
    seed: int | None = None
    times: list[float]
    curves: list[list[list[float]]]
    split: tuple[int, int] | None = None

    def to_trajectory(self) -> Trajectory:
        return Trajectory.from_json_dict(self.model_dump())

    @classmethod
    def from_trajectory(cls, trajectory: Trajectory) -> "TrajectoryModel":
        return cls(**trajectory.to_json_dict())


class LearnerOptions(BaseModel):
    """Optional overrides of the learner defaults."""

    a_init: float = 1.0
    step_size: float = 0.1
    max_iters: int = 500
    grad_tol: float = 1e-6
    a_min: float = 0.05
    a_max: float = 5.0
    use_coarse_scan: bool = True


class HealthResponse(BaseModel):
    status: str
    version: str


class SynthesizeRequest(BaseModel):
    a_true: float
    T: int
    ns: int
    sigma: float = 0.0
    seed: int = 0


class FitRequest(BaseModel):
    trajectory: TrajectoryModel
    options: LearnerOptions = Field(default_factory=LearnerOptions)
    dump_fspace: bool = False
    dump_model: bool = False


class FPointModel(BaseModel):
    a: float
    samples: list[list[float]]


class RegressionModelOut(BaseModel):
    a: float
    beta0: list[list[float]]
    beta1: list[list[float]]
    tau0: list[float]
    tau1: list[float]


class FitResponse(BaseModel):
    a_star: float
    converged: bool
    iterations: int
    r2_val_history: list[tuple[float, float]]
    fspace: list[FPointModel] | None = None
    model: RegressionModelOut | None = None


class GradCheckRequest(BaseModel):
    trajectory: TrajectoryModel
    a: float
    eps: float = 1e-6


class GradCheckResponse(BaseModel):
    a: float
    r2: float
    mse: float
    var: float
    dmse_da: float
    dvar_da: float
    dr2_da: float
    fd_dr2_da: float
    eps: float
    abs_diff: float
    rel_err: float


class CompareRequest(BaseModel):
    trajectory: TrajectoryModel
    options: LearnerOptions = Field(default_factory=LearnerOptions)
    scan_dump: bool = False


class CompareResponse(BaseModel):
    a_true: float | None
    a_star: float
    abs_a_error: float | None
    r2_val_astar: float
    r2_test_astar: float
    r2_test_srv: float
    converged: bool
    iterations: int
    scan: list[tuple[float, float, float]] | None = None


class GridModel(BaseModel):
    a_true: list[float]
    T: list[int]
    n_s: list[int]
    sigma: list[float]
    seeds: list[int]

    def to_grid(self) -> SweepGrid:
        return SweepGrid.from_json_dict(self.model_dump())


class RunRecordModel(BaseModel):
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


class SweepRequest(BaseModel):
    grid: GridModel
    jobs: int = 1


class SweepResponse(BaseModel):
    records: list[RunRecordModel]
    runs_csv: str
    summary_csv: str
    config: dict


class SummarizeRequest(BaseModel):
    runs_csv: str


class SummaryRowModel(BaseModel):
    n_s: int
    sigma: float
    n_runs: int
    n_failed: int
    frac_astar_ge_srv: float | None
    median_abs_a_error: float | None


class SummarizeResponse(BaseModel):
    rows: list[SummaryRowModel]
    summary_csv: str


class ErrorResponse(BaseModel):
    error: str
    detail: str
