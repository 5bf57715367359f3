"""Synthetic cell-shape trajectories: procedural endpoint outlines, exact
geodesic interpolation under a chosen stretching parameter, coordinate noise,
and the sequential 60/30/10 split.

Endpoint shapes are perturbed ellipses rather than microscopy extractions;
every recovery claim downstream concerns the generating parameter, not the
biology, so any smooth closed outline pair serves. Outlines are rotation
aligned so their first segment points along +x, which anchors the angle
branch of the forward transform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .curves import PlanarCurve, derivative, validate_and_normalize
from .errors import NonPositiveA, ShapeMismatch, TrajectoryTooShort
from .ftransform import FPoint, f_forward, f_inverse

TRAIN_FRACTION = 0.6
VAL_FRACTION = 0.3


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered curves with a shared time axis t_i = i/(T-1) and an
    optional sequential (train_end, val_end) split."""

    curves: tuple[PlanarCurve, ...]
    times: np.ndarray
    split: tuple[int, int] | None = None
    a_true: float | None = None
    sigma: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        times = np.asarray(self.times, dtype=float)
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        if len(self.curves) < 5:
            raise TrajectoryTooShort(f"need at least 5 curves, got {len(self.curves)}")
        if len(self.curves) != len(times):
            raise ShapeMismatch(f"{len(self.curves)} curves vs {len(times)} times")
        n_s = self.curves[0].n_points
        if any(c.n_points != n_s for c in self.curves):
            raise ShapeMismatch("all curves in a trajectory must share n_s")
        if self.split is not None:
            train_end, val_end = self.split
            if not (0 < train_end < val_end < len(self.curves)):
                raise ShapeMismatch(f"invalid split indices {self.split} for T={len(self.curves)}")

    @property
    def n_curves(self) -> int:
        return len(self.curves)

    @property
    def n_points(self) -> int:
        return self.curves[0].n_points

    def _split_range(self, which: str) -> range:
        if self.split is None:
            raise ShapeMismatch("trajectory has no split; call split_trajectory first")
        train_end, val_end = self.split
        if which == "train":
            return range(0, train_end)
        if which == "val":
            return range(train_end, val_end)
        if which == "test":
            return range(val_end, self.n_curves)
        raise ValueError(f"unknown split name {which!r}")

    def split_arrays(self, which: str) -> tuple[list[PlanarCurve], np.ndarray]:
        idx = self._split_range(which)
        return [self.curves[i] for i in idx], self.times[list(idx)]

    def to_json_dict(self) -> dict:
        return {
            "a_true": self.a_true,
            "sigma": self.sigma,
            "seed": self.seed,
            "times": self.times.tolist(),
            "curves": [c.points.tolist() for c in self.curves],
            "split": list(self.split) if self.split is not None else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Trajectory":
        split = data.get("split")
        return cls(
            curves=tuple(PlanarCurve(np.asarray(pts, dtype=float)) for pts in data["curves"]),
            times=np.asarray(data["times"], dtype=float),
            split=tuple(split) if split is not None else None,
            a_true=data.get("a_true"),
            sigma=data.get("sigma", 0.0),
            seed=data.get("seed"),
        )


def save_trajectory(trajectory: Trajectory, path) -> None:
    Path(path).write_text(json.dumps(trajectory.to_json_dict()))


def load_trajectory(path) -> Trajectory:
    return Trajectory.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SweepGrid:
    """Parameter lists for the experiment sweep, crossed with seeds."""

    a_true_values: tuple[float, ...]
    T_values: tuple[int, ...]
    ns_values: tuple[int, ...]
    sigma_values: tuple[float, ...]
    seeds: tuple[int, ...]

    def __post_init__(self):
        for name in ("a_true_values", "T_values", "ns_values", "sigma_values", "seeds"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ("a_true_values", "T_values", "ns_values", "sigma_values"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        # an empty seeds list is allowed and yields an empty sweep
        if any(a <= 0 for a in self.a_true_values):
            raise NonPositiveA("all a_true values must be positive")
        if any(s < 0 for s in self.sigma_values):
            raise ValueError("noise levels must be nonnegative")

    def cells(self) -> list[tuple[float, int, int, float, int]]:
        """Cartesian product (a_true, T, n_s, sigma, seed), sorted by parameters."""
        return [
            (a, T, ns, sigma, seed)
            for a in sorted(self.a_true_values)
            for T in sorted(self.T_values)
            for ns in sorted(self.ns_values)
            for sigma in sorted(self.sigma_values)
            for seed in sorted(self.seeds)
        ]

    def to_json_dict(self) -> dict:
        return {
            "a_true": list(self.a_true_values),
            "T": list(self.T_values),
            "n_s": list(self.ns_values),
            "sigma": list(self.sigma_values),
            "seeds": list(self.seeds),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepGrid":
        return cls(
            a_true_values=tuple(data["a_true"]),
            T_values=tuple(data["T"]),
            ns_values=tuple(data["n_s"]),
            sigma_values=tuple(data["sigma"]),
            seeds=tuple(data["seeds"]),
        )


def _sample_outline(n_s: int, axes: tuple[float, float], orders, amps, phases) -> np.ndarray:
    """Evaluate a radially perturbed ellipse at n_s approximately
    arclength-uniform parameters. Points lie exactly on the analytic outline."""
    dense = np.linspace(0.0, 2.0 * np.pi, 2048, endpoint=False)

    def eval_at(phi):
        radial = 1.0 + sum(amp * np.cos(order * phi + phase)
                           for order, amp, phase in zip(orders, amps, phases))
        return np.stack([axes[0] * radial * np.cos(phi),
                         axes[1] * radial * np.sin(phi)], axis=-1)

    ring = eval_at(dense)
    chords = np.linalg.norm(np.diff(np.vstack([ring, ring[:1]]), axis=0), axis=1)
    cumlen = np.concatenate([[0.0], np.cumsum(chords)])
    targets = np.linspace(0.0, cumlen[-1], n_s, endpoint=False)
    phi_ext = np.concatenate([dense, [2.0 * np.pi]])
    return eval_at(np.interp(targets, cumlen, phi_ext))


def endpoint_shapes(n_s: int, seed: int, amplitude: float = 0.2,
                    align_rotation: bool = True) -> tuple[PlanarCurve, PlanarCurve]:
    """Two smooth closed cell-like outlines, deterministic in the seed.

    Each is an ellipse with 3 to 6 low-frequency radial harmonics whose total
    amplitude stays below ``amplitude`` times the mean radius; pass
    ``amplitude=0`` for exact ellipses. Outlines are resampled to n_s points
    and normalized.
    """
    if n_s < 10:
        raise TrajectoryTooShort(f"endpoint shapes need n_s >= 10, got {n_s}")
    rng = np.random.default_rng(seed)
    shapes = []
    for _ in range(2):
        axes = (rng.uniform(0.9, 1.3), rng.uniform(0.6, 0.9))
        n_harm = int(rng.integers(3, 7))
        orders = rng.choice(np.arange(2, 8), size=n_harm, replace=False)
        amps = rng.uniform(0.2, 1.0, size=n_harm)
        amps *= amplitude / amps.sum() if amps.sum() > 0 else 0.0
        phases = rng.uniform(0.0, 2.0 * np.pi, size=n_harm)
        points = _sample_outline(n_s, axes, orders, amps, phases)
        shapes.append(validate_and_normalize(points, align_rotation=align_rotation,
                                             closed=True))
    return shapes[0], shapes[1]


def geodesic_between(c0: PlanarCurve, c1: PlanarCurve, a_true: float, T: int) -> Trajectory:
    """Trajectory of T curves tracing the straight transform-space line from
    c0 to c1 under stretching parameter a_true.

    Transform space forgets translation, so the base point of each
    reconstructed curve is chosen to interpolate the centroids of c0 and c1
    linearly. Endpoints reproduce the inputs to rounding accuracy.
    """
    if c0.n_points != c1.n_points:
        raise ShapeMismatch(f"endpoint curves differ in n_s: {c0.n_points} vs {c1.n_points}")
    if a_true <= 0:
        raise NonPositiveA(f"a_true must be positive, got {a_true}")
    if T < 5:
        raise TrajectoryTooShort(f"need T >= 5, got {T}")

    q0 = f_forward(derivative(c0), a_true)
    q1 = f_forward(derivative(c1), a_true)
    times = np.linspace(0.0, 1.0, T)
    cent0, cent1 = c0.centroid, c1.centroid

    curves = []
    for t in times:
        samples = (1.0 - t) * q0.samples + t * q1.samples
        curve = f_inverse(FPoint(samples=samples, a=a_true, ds=q0.ds), base_point=(0.0, 0.0))
        target = (1.0 - t) * cent0 + t * cent1
        curves.append(curve.translated(target - curve.centroid))
    return Trajectory(curves=tuple(curves), times=times, a_true=a_true, sigma=0.0)


def add_noise(trajectory: Trajectory, sigma: float, seed: int) -> Trajectory:
    """Perturb every coordinate with independent centered Gaussian noise.

    Noisy curves are re-validated but not re-normalized; re-centering or
    re-scaling would partially cancel the injected noise. sigma = 0 returns
    the same curves untouched.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return replace(trajectory, sigma=0.0, seed=seed)
    rng = np.random.default_rng(seed)
    noisy = tuple(
        PlanarCurve(c.points + rng.normal(0.0, sigma, size=c.points.shape), closed=c.closed)
        for c in trajectory.curves
    )
    return replace(trajectory, curves=noisy, sigma=sigma, seed=seed)


def split_trajectory(trajectory: Trajectory) -> Trajectory:
    """Attach the sequential 60/30/10 split.

    train_end = floor(0.6 T) and val_end = train_end + floor(0.3 T); if
    flooring ever left the test segment empty, the last validation index
    would be reassigned to it.
    """
    T = trajectory.n_curves
    if T < 5:
        raise TrajectoryTooShort(f"need T >= 5 to split, got {T}")
    train_end = int(np.floor(TRAIN_FRACTION * T))
    val_end = train_end + int(np.floor(VAL_FRACTION * T))
    if val_end >= T:
        val_end = T - 1
    return replace(trajectory, split=(train_end, val_end))


def make_trajectory(a_true: float, T: int, n_s: int, sigma: float, seed: int) -> Trajectory:
    """End-to-end generation: endpoint shapes, geodesic, noise, split.

    The endpoint generator consumes ``seed`` and the noise stream ``seed + 1``
    so the clean geodesic is shared across noise levels.
    """
    c0, c1 = endpoint_shapes(n_s, seed)
    trajectory = geodesic_between(c0, c1, a_true, T)
    trajectory = add_noise(trajectory, sigma, seed + 1)
    return split_trajectory(replace(trajectory, seed=seed))
