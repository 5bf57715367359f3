"""FastAPI application wrapping the curvemetric pipeline.

Every endpoint is a thin adapter: parse the request models, call the
library, marshal the result back. Domain errors surface as HTTP 422 with the
exception class name, so clients can branch on the failure kind.
"""

from __future__ import annotations

import dataclasses

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..curves import derivative
from ..errors import CurveMetricError
from ..ftransform import f_forward
from ..gradient import RegressionProblem, dr2_da, fd_r2_gradient
from ..harness import (
    compare,
    dense_scan,
    records_from_csv,
    records_to_csv,
    run_sweep,
    summarize,
    summary_to_csv,
)
from ..learner import LearnerConfig, learn_a
from ..regression import TimeDesign, fit
from ..synthetic import make_trajectory
from .schemas import (
    CompareRequest,
    CompareResponse,
    FitRequest,
    FitResponse,
    FPointModel,
    GradCheckRequest,
    GradCheckResponse,
    HealthResponse,
    LearnerOptions,
    RegressionModelOut,
    RunRecordModel,
    SummarizeRequest,
    SummarizeResponse,
    SummaryRowModel,
    SweepRequest,
    SweepResponse,
    SynthesizeRequest,
    TrajectoryModel,
)

app = FastAPI(title="curvemetric", version=__version__)


@app.exception_handler(CurveMetricError)
async def curvemetric_error_handler(request: Request, exc: CurveMetricError):
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__, "detail": str(exc)})


def _config(options: LearnerOptions) -> LearnerConfig:
    return LearnerConfig(
        a_init=options.a_init,
        step_size=options.step_size,
        max_iters=options.max_iters,
        grad_tol=options.grad_tol,
        a_min=options.a_min,
        a_max=options.a_max,
        use_coarse_scan=options.use_coarse_scan,
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/synthesize", response_model=TrajectoryModel)
def synthesize(req: SynthesizeRequest) -> TrajectoryModel:
    trajectory = make_trajectory(req.a_true, req.T, req.ns, req.sigma, req.seed)
    return TrajectoryModel.from_trajectory(trajectory)


@app.post("/fit", response_model=FitResponse, response_model_exclude_none=True)
def fit_endpoint(req: FitRequest) -> FitResponse:
    trajectory = req.trajectory.to_trajectory()
    result = learn_a(trajectory, _config(req.options))
    fspace = model_out = None
    if req.dump_fspace:
        fspace = [
            FPointModel(**f_forward(derivative(c), result.a_star).to_json_dict())
            for c in trajectory.curves
        ]
    if req.dump_model:
        train_curves, train_times = trajectory.split_arrays("train")
        fpoints = [f_forward(derivative(c), result.a_star) for c in train_curves]
        model = fit(fpoints, TimeDesign.from_times(train_times))
        model_out = RegressionModelOut(**model.to_json_dict())
    return FitResponse(a_star=result.a_star, converged=result.converged,
                       iterations=result.iterations,
                       r2_val_history=list(result.r2_val_history),
                       fspace=fspace, model=model_out)


@app.post("/gradcheck", response_model=GradCheckResponse)
def gradcheck(req: GradCheckRequest) -> GradCheckResponse:
    problem = RegressionProblem.from_trajectory(req.trajectory.to_trajectory(), "val")
    report = dr2_da(problem, req.a)
    fd = fd_r2_gradient(problem, req.a, req.eps)
    abs_diff = abs(report.dr2_da - fd)
    return GradCheckResponse(
        **report.to_json_dict(), fd_dr2_da=fd, eps=req.eps, abs_diff=abs_diff,
        rel_err=abs_diff / max(1.0, abs(report.dr2_da)),
    )


@app.post("/compare", response_model=CompareResponse, response_model_exclude_none=True)
def compare_endpoint(req: CompareRequest) -> CompareResponse:
    trajectory = req.trajectory.to_trajectory()
    report = compare(trajectory, _config(req.options))
    scan = dense_scan(trajectory) if req.scan_dump else None
    return CompareResponse(**report, scan=scan)


@app.post("/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest) -> SweepResponse:
    grid = req.grid.to_grid()
    records = run_sweep(grid, parallelism=req.jobs)
    return SweepResponse(
        records=[RunRecordModel(**dataclasses.asdict(r)) for r in records],
        runs_csv=records_to_csv(records),
        summary_csv=summary_to_csv(summarize(records)),
        config={"grid": grid.to_json_dict(), "parallelism": req.jobs,
                "version": __version__},
    )


@app.post("/summarize", response_model=SummarizeResponse)
def summarize_endpoint(req: SummarizeRequest) -> SummarizeResponse:
    rows = summarize(records_from_csv(req.runs_csv))
    return SummarizeResponse(
        rows=[SummaryRowModel(**dataclasses.asdict(r)) for r in rows],
        summary_csv=summary_to_csv(rows),
    )
