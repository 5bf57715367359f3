"""Gradient ascent on validation-set R^2 over the stretching parameter.

The objective R^2(a) refits the train-split regression at every candidate a
and scores the validation split. Ascent steps are fixed-size moves along the
analytic gradient, clamped to [a_min, a_max], with halving backtracking
whenever a proposed move would lower validation R^2. An optional coarse grid
scan picks the starting point, guarding against the nonconvexity of R^2(a).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateSplit
from .gradient import RegressionProblem, dr2_da, evaluate_r2
from .synthetic import Trajectory

DEFAULT_SCAN_GRID = tuple(float(x) for x in np.round(np.arange(1, 21) * 0.1, 10))  # 0.1 .. 2.0
MAX_BACKTRACKS = 20


@dataclass(frozen=True)
class LearnerConfig:
    a_init: float = 1.0
    step_size: float = 0.1
    max_iters: int = 500
    grad_tol: float = 1e-6
    a_min: float = 0.05
    a_max: float = 5.0
    use_coarse_scan: bool = True
    scan_grid: tuple[float, ...] = field(default=DEFAULT_SCAN_GRID)

    def __post_init__(self):
        if not (0 < self.a_min < self.a_max):
            raise ValueError(f"need 0 < a_min < a_max, got [{self.a_min}, {self.a_max}]")
        if self.step_size <= 0:
            raise ValueError(f"step_size must be positive, got {self.step_size}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        object.__setattr__(self, "scan_grid", tuple(self.scan_grid))

    def clamp(self, a: float) -> float:
        return min(max(a, self.a_min), self.a_max)


@dataclass(frozen=True)
class LearnResult:
    a_star: float
    r2_val_history: tuple[tuple[float, float], ...]  # (a, R^2) per iterate
    converged: bool
    iterations: int


def step_policy(gradient: float, current_a: float, config: LearnerConfig,
                objective: Callable[[float], float] | None = None,
                current_value: float | None = None) -> float:
    """Propose the next a: fixed step along the gradient, clamped to bounds.

    When an objective is supplied, a proposal that lowers it triggers step
    halving, up to MAX_BACKTRACKS times. Returning ``current_a`` unchanged
    signals that no acceptable move exists (the caller should stop).
    """
    if gradient == 0.0:
        return current_a
    if objective is not None and current_value is None:
        current_value = objective(current_a)
    step = config.step_size
    for _ in range(MAX_BACKTRACKS + 1):
        candidate = config.clamp(current_a + step * gradient)
        if candidate == current_a:
            return current_a  # clamped into a no-move
        if objective is None:
            return candidate
        if objective(candidate) > current_value:
            return candidate
        step *= 0.5
    return current_a


def learn_a(trajectory: Trajectory, config: LearnerConfig | None = None) -> LearnResult:
    """Learn the stretching parameter maximizing validation-set R^2.

    Deterministic: the same trajectory and config always produce the same
    result. Convergence is declared on gradient magnitude below grad_tol or
    on backtracking finding no improving move; running out of iterations
    reports converged=False.
    """
    config = config or LearnerConfig()
    if trajectory.split is None:
        raise DegenerateSplit("trajectory has no split")
    train_end, val_end = trajectory.split
    if train_end < 2 or val_end - train_end < 2:
        raise DegenerateSplit(
            f"need >= 2 train and >= 2 validation curves, got {train_end} and {val_end - train_end}"
        )

    problem = RegressionProblem.from_trajectory(trajectory, eval_split="val")

    def objective(a: float) -> float:
        return evaluate_r2(problem, a)

    a = float(config.clamp(config.a_init))
    if config.use_coarse_scan:
        grid = [float(g) for g in config.scan_grid if config.a_min <= g <= config.a_max]
        if grid:
            scan_values = [objective(g) for g in grid]
            a = grid[int(np.argmax(scan_values))]

    history: list[tuple[float, float]] = []
    converged = False
    iterations = 0
    for _ in range(config.max_iters):
        iterations += 1
        report = dr2_da(problem, a)
        history.append((a, report.r2))
        if abs(report.dr2_da) < config.grad_tol:
            converged = True
            break
        next_a = float(step_policy(report.dr2_da, a, config,
                                   objective=objective, current_value=report.r2))
        if next_a == a:
            converged = True  # backtracking exhausted: no improving move
            break
        a = next_a
    else:
        history.append((a, objective(a)))

    return LearnResult(a_star=a, r2_val_history=tuple(history),
                       converged=converged, iterations=iterations)
