"""curvemetric: learn the stretching parameter of the elastic metric that
best fits a time-ordered trajectory of planar curves, and compare its
predictive fit against the conventional baseline (a = 1, bending 0.5)."""

__version__ = "0.1.0"

from .curves import (
    PlanarCurve,
    VelocityField,
    derivative,
    elastic_inner_product,
    load_curve,
    validate_and_normalize,
)
from .errors import (
    CurveMetricError,
    DegenerateSegment,
    DegenerateSplit,
    EmptyInput,
    MetricMismatch,
    NonFiniteCoordinate,
    NonPositiveA,
    ShapeMismatch,
    SingularDesign,
    TooFewPoints,
    TrajectoryTooShort,
    ZeroSample,
    ZeroVariance,
)
from .ftransform import FPoint, f_distance, f_forward, f_inverse
from .gradient import (
    GradientReport,
    RegressionProblem,
    df_da,
    dmse_da,
    dr2_da,
    dvar_da,
    evaluate_r2,
    fd_r2_gradient,
)
from .harness import RunRecord, compare, dense_scan, run_single, run_sweep, summarize
from .learner import LearnResult, LearnerConfig, learn_a, step_policy
from .regression import (
    RegressionModel,
    TimeDesign,
    fit,
    mse,
    predict,
    r_squared,
    variance,
)
from .synthetic import (
    SweepGrid,
    Trajectory,
    add_noise,
    endpoint_shapes,
    geodesic_between,
    load_trajectory,
    make_trajectory,
    save_trajectory,
    split_trajectory,
)

__all__ = [
    "__version__",
    "PlanarCurve", "VelocityField", "derivative", "elastic_inner_product",
    "load_curve", "validate_and_normalize",
    "CurveMetricError", "DegenerateSegment", "DegenerateSplit", "EmptyInput",
    "MetricMismatch", "NonFiniteCoordinate", "NonPositiveA", "ShapeMismatch",
    "SingularDesign", "TooFewPoints", "TrajectoryTooShort", "ZeroSample",
    "ZeroVariance",
    "FPoint", "f_distance", "f_forward", "f_inverse",
    "GradientReport", "RegressionProblem", "df_da", "dmse_da", "dr2_da",
    "dvar_da", "evaluate_r2", "fd_r2_gradient",
    "RunRecord", "compare", "dense_scan", "run_single", "run_sweep", "summarize",
    "LearnResult", "LearnerConfig", "learn_a", "step_policy",
    "RegressionModel", "TimeDesign", "fit", "mse", "predict", "r_squared",
    "variance",
    "SweepGrid", "Trajectory", "add_noise", "endpoint_shapes",
    "geodesic_between", "load_trajectory", "make_trajectory",
    "save_trajectory", "split_trajectory",
]
