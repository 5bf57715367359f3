"""Linear regression in transform space: closed-form normal equations,
predictions, and the goodness-of-fit quantities MSE, VAR, and R^2.

Because geodesics of the elastic metric are straight lines in transform
space, geodesic regression of a curve trajectory reduces to fitting
q_i = beta0 + beta1 * t_i by least squares, one scalar regression per
transform coordinate. The fitted coefficients are linear combinations of the
training transforms with time-only weights (tau0, tau1), a fact the gradient
module relies on.

All squared norms carry the Riemann weight ds = 1/(n_s - 1), and MSE / VAR
are un-normalized sums over the evaluation set, so R^2 = 1 - MSE/VAR is
dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    MetricMismatch,
    ShapeMismatch,
    SingularDesign,
    TooFewPoints,
    ZeroVariance,
)
from .ftransform import FPoint

# Below this, an evaluation set is considered constant and R^2 undefined.
VARIANCE_FLOOR = 1e-24


@dataclass(frozen=True)
class TimeDesign:
    """Train-set time design: times plus the sums entering the 2x2 normal
    equations. ``tbar`` and ``tbar2`` are the plain sums of t_i and t_i^2."""

    times: np.ndarray
    tbar: float
    tbar2: float
    n_train: int

    @classmethod
    def from_times(cls, times) -> "TimeDesign":
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or len(t) < 2:
            raise TooFewPoints(f"need at least 2 train times, got {t.shape}")
        if not (np.diff(t) > 0).all():
            raise SingularDesign("train times must be strictly increasing")
        design = cls(times=t, tbar=float(t.sum()), tbar2=float((t * t).sum()),
                     n_train=len(t))
        if design.determinant <= 0:
            raise SingularDesign("design matrix is singular (times too degenerate)")
        return design

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @property
    def determinant(self) -> float:
        return self.n_train * self.tbar2 - self.tbar ** 2


def tau_coefficients(design: TimeDesign) -> tuple[np.ndarray, np.ndarray]:
    """Per-train-index weights (tau0, tau1) such that the fitted intercept is
    sum_i tau0[i] q_i and the fitted slope is sum_i tau1[i] q_i."""
    det = design.determinant
    tau0 = (design.tbar2 - design.tbar * design.times) / det
    tau1 = (design.n_train * design.times - design.tbar) / det
    return tau0, tau1


@dataclass(frozen=True)
class RegressionModel:
    """Fitted intercept/slope in transform space plus the tau weights that
    produced them, tagged with the stretching parameter ``a``."""

    beta0: np.ndarray  # (m, 2)
    beta1: np.ndarray  # (m, 2)
    a: float
    ds: float
    tau0: np.ndarray   # (n_train,)
    tau1: np.ndarray   # (n_train,)

    def __post_init__(self):
        for name in ("beta0", "beta1", "tau0", "tau1"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.beta0.shape != self.beta1.shape:
            raise ShapeMismatch("intercept and slope must share one shape")

    def to_json_dict(self) -> dict:
        return {
            "a": self.a,
            "beta0": self.beta0.tolist(),
            "beta1": self.beta1.tolist(),
            "tau0": self.tau0.tolist(),
            "tau1": self.tau1.tolist(),
        }


def _stack(fpoints: Sequence[FPoint]) -> tuple[np.ndarray, float, float]:
    """Stack FPoints into an (n, m, 2) array, checking layout consistency."""
    if not fpoints:
        raise TooFewPoints("no transform points given")
    a = fpoints[0].a
    shape = fpoints[0].samples.shape
    ds = fpoints[0].ds
    for q in fpoints:
        if q.samples.shape != shape or q.ds != ds:
            raise ShapeMismatch("transform points do not share one sampling layout")
        if q.a != a:
            raise MetricMismatch(f"mixed stretching parameters: {q.a} vs {a}")
    return np.stack([q.samples for q in fpoints]), a, ds


def fit_stacked(q: np.ndarray, tau0: np.ndarray, tau1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form least squares on a stacked (n, m, 2) response."""
    beta0 = np.tensordot(tau0, q, axes=(0, 0))
    beta1 = np.tensordot(tau1, q, axes=(0, 0))
    return beta0, beta1


def predict_stacked(beta0: np.ndarray, beta1: np.ndarray, times: np.ndarray) -> np.ndarray:
    return beta0[None, :, :] + times[:, None, None] * beta1[None, :, :]


def mse_stacked(q: np.ndarray, predictions: np.ndarray, ds: float) -> float:
    resid = q - predictions
    return float(np.sum(resid * resid) * ds)


def variance_stacked(q: np.ndarray, ds: float) -> float:
    centered = q - q.mean(axis=0)
    return float(np.sum(centered * centered) * ds)


def fit(train_fpoints: Sequence[FPoint], design: TimeDesign) -> RegressionModel:
    """Fit the transform-space line through the train set.

    Uses the closed-form tau weights rather than a generic matrix solve; the
    result equals the dense least-squares solution.
    """
    q, a, ds = _stack(train_fpoints)
    if len(train_fpoints) != design.n_train:
        raise ShapeMismatch(
            f"{len(train_fpoints)} train points but design has n_train={design.n_train}"
        )
    tau0, tau1 = tau_coefficients(design)
    beta0, beta1 = fit_stacked(q, tau0, tau1)
    return RegressionModel(beta0=beta0, beta1=beta1, a=a, ds=ds, tau0=tau0, tau1=tau1)


def predict(model: RegressionModel, t: float) -> FPoint:
    """Transform-space prediction beta0 + t * beta1 at time t."""
    return FPoint(samples=model.beta0 + t * model.beta1, a=model.a, ds=model.ds)


def mse(model: RegressionModel, eval_fpoints: Sequence[FPoint], eval_times) -> float:
    """Un-normalized sum of squared residuals over the evaluation set."""
    q, a, ds = _stack(eval_fpoints)
    times = np.asarray(eval_times, dtype=float)
    if len(times) != len(eval_fpoints):
        raise ShapeMismatch(f"{len(eval_fpoints)} points vs {len(times)} times")
    if q.shape[1:] != model.beta0.shape or a != model.a:
        raise ShapeMismatch("evaluation points are incompatible with the model")
    return mse_stacked(q, predict_stacked(model.beta0, model.beta1, times), ds)


def variance(eval_fpoints: Sequence[FPoint]) -> float:
    """Un-normalized scatter of the evaluation set around its mean transform."""
    if len(eval_fpoints) < 2:
        raise TooFewPoints("variance needs at least 2 evaluation points")
    q, _, ds = _stack(eval_fpoints)
    return variance_stacked(q, ds)


def r_squared(model: RegressionModel, eval_fpoints: Sequence[FPoint], eval_times) -> float:
    """Coefficient of determination 1 - MSE/VAR on the evaluation set.

    Negative values are possible (fit worse than the constant mean). Raises
    ZeroVariance when the evaluation set is constant.
    """
    var = variance(eval_fpoints)
    if var <= VARIANCE_FLOOR:
        raise ZeroVariance("evaluation set is constant; R^2 undefined")
    return 1.0 - mse(model, eval_fpoints, eval_times) / var
