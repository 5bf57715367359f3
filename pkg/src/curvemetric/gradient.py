"""Analytic derivative of R^2 with respect to the stretching parameter, plus
the finite-difference oracle used to verify it.

Differentiating a transform sample q_k = |c'_k|^(1/2) exp(i a theta_k) in a
rotates it a quarter turn and scales it by theta_k:

    dq_k/da = |c'_k|^(1/2) * theta_k * exp(i (pi/2 + a theta_k)).

The tau regression weights depend on times only, so the derivative of a
residual flows through both the evaluation transform and the train transforms
inside the fitted line. dR^2/da then assembles by the quotient rule from
dMSE/da and dVAR/da.

Everything here works on a ``RegressionProblem``: the velocity data of a
train split and an evaluation split, stacked for vectorized evaluation at any
number of a values. The angles are unwrapped once per curve and reused, which
keeps R^2(a) smooth in a.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curves import VelocityField, derivative
from .errors import NonPositiveA, ShapeMismatch, TooFewPoints, ZeroVariance
from .ftransform import FPoint
from .regression import (
    VARIANCE_FLOOR,
    TimeDesign,
    fit_stacked,
    mse_stacked,
    predict_stacked,
    tau_coefficients,
    variance_stacked,
)

DEFAULT_FD_EPS = 1e-6


@dataclass(frozen=True)
class GradientReport:
    """dR^2/da at one value of a, with the quantities it was assembled from."""

    a: float
    r2: float
    dr2_da: float
    mse: float
    var: float
    dmse_da: float
    dvar_da: float

    def __post_init__(self):
        expected = -(self.dmse_da * self.var - self.mse * self.dvar_da) / self.var ** 2
        if not np.isclose(self.dr2_da, expected, rtol=0, atol=1e-12 * max(1.0, abs(expected))):
            raise ValueError("gradient report is internally inconsistent")

    def to_json_dict(self) -> dict:
        return {
            "a": self.a, "r2": self.r2, "dr2_da": self.dr2_da,
            "mse": self.mse, "var": self.var,
            "dmse_da": self.dmse_da, "dvar_da": self.dvar_da,
        }


def _stack_fields(vfs: Sequence[VelocityField]) -> tuple[np.ndarray, np.ndarray, float]:
    if not vfs:
        raise TooFewPoints("no velocity fields given")
    m = vfs[0].n_segments
    ds = vfs[0].ds
    for v in vfs:
        if v.n_segments != m or v.ds != ds:
            raise ShapeMismatch("velocity fields do not share one sampling layout")
    mags = np.stack([v.magnitudes for v in vfs])
    thetas = np.stack([v.angles for v in vfs])
    return mags, thetas, ds


def f_stack(mags: np.ndarray, thetas: np.ndarray, a: float) -> np.ndarray:
    """Transform of stacked velocity data: (..., m) magnitudes/angles to (..., m, 2)."""
    root = np.sqrt(mags)
    ang = a * thetas
    return np.stack([root * np.cos(ang), root * np.sin(ang)], axis=-1)


def df_stack(mags: np.ndarray, thetas: np.ndarray, a: float) -> np.ndarray:
    """a-derivative of ``f_stack``: each sample rotated 90 degrees, scaled by theta."""
    root = np.sqrt(mags)
    ang = np.pi / 2 + a * thetas
    return np.stack([root * thetas * np.cos(ang), root * thetas * np.sin(ang)], axis=-1)


def df_da(v: VelocityField, a: float) -> np.ndarray:
    """Per-sample derivative of the forward transform of one curve w.r.t. a."""
    if a <= 0:
        raise NonPositiveA(f"stretching parameter must be positive, got {a}")
    return df_stack(v.magnitudes, v.angles, a)


@dataclass(frozen=True)
class RegressionProblem:
    """Velocity data and times for one train/evaluation pair of a trajectory.

    Stores magnitudes and unwrapped angles stacked per split, so transforms at
    any a are a couple of vectorized trig calls.
    """

    train_mags: np.ndarray    # (n_train, m)
    train_thetas: np.ndarray  # (n_train, m)
    train_times: np.ndarray   # (n_train,)
    eval_mags: np.ndarray     # (n_eval, m)
    eval_thetas: np.ndarray   # (n_eval, m)
    eval_times: np.ndarray    # (n_eval,)
    ds: float

    @classmethod
    def from_fields(cls, train_vfs: Sequence[VelocityField], train_times,
                    eval_vfs: Sequence[VelocityField], eval_times) -> "RegressionProblem":
        tm, tt, ds = _stack_fields(train_vfs)
        em, et, ds_e = _stack_fields(eval_vfs)
        if ds_e != ds or em.shape[1] != tm.shape[1]:
            raise ShapeMismatch("train and evaluation curves do not share one sampling")
        return cls(train_mags=tm, train_thetas=tt,
                   train_times=np.asarray(train_times, dtype=float),
                   eval_mags=em, eval_thetas=et,
                   eval_times=np.asarray(eval_times, dtype=float), ds=ds)

    @classmethod
    def from_trajectory(cls, trajectory, eval_split: str = "val") -> "RegressionProblem":
        """Build the problem from a split trajectory; eval_split is one of
        'train', 'val', 'test'."""
        curves, times = trajectory.split_arrays(eval_split)
        train_curves, train_times = trajectory.split_arrays("train")
        return cls.from_fields([derivative(c) for c in train_curves], train_times,
                               [derivative(c) for c in curves], times)

    @property
    def design(self) -> TimeDesign:
        return TimeDesign.from_times(self.train_times)

    def train_fpoints(self, a: float) -> list[FPoint]:
        stack = f_stack(self.train_mags, self.train_thetas, a)
        return [FPoint(samples=s, a=a, ds=self.ds) for s in stack]


def _pipeline(problem: RegressionProblem, a: float):
    """Fit on the train split at a; return residual pieces on the eval split."""
    if a <= 0:
        raise NonPositiveA(f"stretching parameter must be positive, got {a}")
    tau0, tau1 = tau_coefficients(problem.design)
    q_train = f_stack(problem.train_mags, problem.train_thetas, a)
    beta0, beta1 = fit_stacked(q_train, tau0, tau1)
    q_eval = f_stack(problem.eval_mags, problem.eval_thetas, a)
    predictions = predict_stacked(beta0, beta1, problem.eval_times)
    return tau0, tau1, q_eval, predictions


def evaluate_r2(problem: RegressionProblem, a: float) -> float:
    """Refit on the train split under a and score R^2 on the evaluation split."""
    _, _, q_eval, predictions = _pipeline(problem, a)
    var = variance_stacked(q_eval, problem.ds)
    if var <= VARIANCE_FLOOR:
        raise ZeroVariance("evaluation split is constant; R^2 undefined")
    return 1.0 - mse_stacked(q_eval, predictions, problem.ds) / var


def dmse_da(problem: RegressionProblem, a: float) -> float:
    """Derivative of the evaluation MSE in a, including the path through the
    train transforms inside the fitted line (tau weights are constants)."""
    tau0, tau1, q_eval, predictions = _pipeline(problem, a)
    d_train = df_stack(problem.train_mags, problem.train_thetas, a)
    d_eval = df_stack(problem.eval_mags, problem.eval_thetas, a)
    dbeta0, dbeta1 = fit_stacked(d_train, tau0, tau1)
    d_resid = d_eval - predict_stacked(dbeta0, dbeta1, problem.eval_times)
    resid = q_eval - predictions
    return float(2.0 * np.sum(d_resid * resid) * problem.ds)


def dvar_da(eval_vfs: Sequence[VelocityField], a: float) -> float:
    """Derivative of the evaluation-set scatter in a."""
    if len(eval_vfs) < 2:
        raise TooFewPoints("variance derivative needs at least 2 curves")
    if a <= 0:
        raise NonPositiveA(f"stretching parameter must be positive, got {a}")
    mags, thetas, ds = _stack_fields(eval_vfs)
    q = f_stack(mags, thetas, a)
    dq = df_stack(mags, thetas, a)
    centered = q - q.mean(axis=0)
    d_centered = dq - dq.mean(axis=0)
    return float(2.0 * np.sum(d_centered * centered) * ds)


def _dvar_stacked(mags: np.ndarray, thetas: np.ndarray, a: float, ds: float) -> float:
    q = f_stack(mags, thetas, a)
    dq = df_stack(mags, thetas, a)
    return float(2.0 * np.sum((dq - dq.mean(axis=0)) * (q - q.mean(axis=0))) * ds)


def dr2_da(problem: RegressionProblem, a: float) -> GradientReport:
    """Assemble dR^2/da by the quotient rule; raises ZeroVariance on constant
    evaluation splits."""
    tau0, tau1, q_eval, predictions = _pipeline(problem, a)
    var = variance_stacked(q_eval, problem.ds)
    if var <= VARIANCE_FLOOR:
        raise ZeroVariance("evaluation split is constant; R^2 undefined")
    mse = mse_stacked(q_eval, predictions, problem.ds)
    dmse = dmse_da(problem, a)
    dvar = _dvar_stacked(problem.eval_mags, problem.eval_thetas, a, problem.ds)
    grad = -(dmse * var - mse * dvar) / var ** 2
    return GradientReport(a=a, r2=1.0 - mse / var, dr2_da=grad,
                          mse=mse, var=var, dmse_da=dmse, dvar_da=dvar)


def fd_r2_gradient(problem: RegressionProblem, a: float, eps: float = DEFAULT_FD_EPS) -> float:
    """Central finite difference of R^2 over a, recomputing the full pipeline
    (transform, fit, R^2) at each shifted a."""
    if a - eps <= 0:
        raise NonPositiveA(f"a - eps must stay positive, got a={a}, eps={eps}")
    return (evaluate_r2(problem, a + eps) - evaluate_r2(problem, a - eps)) / (2.0 * eps)
