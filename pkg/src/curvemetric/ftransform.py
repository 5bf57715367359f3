"""Forward and inverse transform between curves and the flat space where the
elastic metric (bending weight fixed at 0.5) becomes Euclidean.

With the bending weight pinned to 0.5 the transform of a velocity field is,
per segment and in complex notation,

    q_k = |c'_k|^(1/2) * exp(i * a * theta_k)

where theta_k is the sequentially unwrapped tangent angle. Working with the
unwrapped angle (never principal-branch complex powers) keeps q continuous
along the curve for non-integer a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import PlanarCurve, VelocityField
from .errors import MetricMismatch, NonPositiveA, ShapeMismatch, ZeroSample

ZERO_SAMPLE_EPS = 1e-12


@dataclass(frozen=True)
class FPoint:
    """A curve's image in transform space: n_s - 1 planar samples, tagged with
    the stretching parameter ``a`` they were produced under."""

    samples: np.ndarray  # (n_s - 1, 2)
    a: float
    ds: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise ShapeMismatch(f"samples must be (m, 2), got {samples.shape}")
        if len(samples) < 2:
            raise ShapeMismatch("an FPoint needs at least 2 samples")
        if not np.isfinite(samples).all():
            raise ShapeMismatch("samples contain NaN or infinite values")
        if self.a <= 0:
            raise NonPositiveA(f"stretching parameter must be positive, got {self.a}")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    def to_json_dict(self) -> dict:
        return {"a": self.a, "samples": self.samples.tolist()}


def f_forward(v: VelocityField, a: float) -> FPoint:
    """Map a velocity field into transform space under stretching parameter a."""
    if a <= 0:
        raise NonPositiveA(f"stretching parameter must be positive, got {a}")
    root = np.sqrt(v.magnitudes)
    ang = a * v.angles
    samples = np.stack([root * np.cos(ang), root * np.sin(ang)], axis=1)
    return FPoint(samples=samples, a=a, ds=v.ds)


def f_inverse(q: FPoint, base_point) -> PlanarCurve:
    """Reconstruct a curve from its transform, anchored at ``base_point``.

    Sample magnitudes give back |c'| = |q|^2; sample angles are unwrapped and
    divided by a to give the tangent angles; the velocity is then integrated
    with step ds. The angle of the first sample is read in (-pi, pi], so the
    reconstruction is exact on forward images whose first tangent angle
    satisfies |a * theta_0| <= pi (rotation-aligned curves have theta_0 = 0).
    Translation is not encoded in q; it is restored through base_point.
    """
    radii = np.hypot(q.samples[:, 0], q.samples[:, 1])
    if (radii < ZERO_SAMPLE_EPS).any():
        k = int(np.argmax(radii < ZERO_SAMPLE_EPS))
        raise ZeroSample(f"sample {k} is too close to zero, angle undefined")
    phi = np.unwrap(np.arctan2(q.samples[:, 1], q.samples[:, 0]))
    theta = phi / q.a
    speeds = radii ** 2
    velocity = speeds[:, None] * np.stack([np.cos(theta), np.sin(theta)], axis=1)

    points = np.empty((q.n_samples + 1, 2))
    points[0] = np.asarray(base_point, dtype=float)
    points[1:] = points[0] + np.cumsum(velocity * q.ds, axis=0)
    return PlanarCurve(points, closed=False)


def f_distance(q1: FPoint, q2: FPoint) -> float:
    """Flat distance between two transforms: sqrt(sum |q1_k - q2_k|^2 ds)."""
    if q1.samples.shape != q2.samples.shape or q1.ds != q2.ds:
        raise ShapeMismatch(
            f"transforms have incompatible sampling: {q1.samples.shape} vs {q2.samples.shape}"
        )
    if q1.a != q2.a:
        raise MetricMismatch(f"cannot compare transforms with a={q1.a} and a={q2.a}")
    diff = q1.samples - q2.samples
    return float(np.sqrt(np.sum(diff * diff) * q1.ds))
