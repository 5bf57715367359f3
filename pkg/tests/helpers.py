"""Shared generators for the test suite: seeded random curves and deformations.

Curves are rotation aligned (first segment along +x) so the transform's angle
branch is anchored at zero, which the inverse relies on for a > 1.
"""

import numpy as np

from curvemetric.curves import PlanarCurve, validate_and_normalize


def random_closed_curve(rng, n_s: int) -> PlanarCurve:
    """Smooth random closed outline: ellipse with low-frequency radial wobble."""
    phi = np.linspace(0.0, 2.0 * np.pi, n_s, endpoint=False)
    radius = np.ones_like(phi)
    for order in rng.choice(np.arange(2, 7), size=3, replace=False):
        radius += rng.uniform(0.02, 0.06) * np.cos(order * phi + rng.uniform(0, 2 * np.pi))
    axes = (rng.uniform(0.8, 1.2), rng.uniform(0.6, 1.0))
    points = np.stack([axes[0] * radius * np.cos(phi), axes[1] * radius * np.sin(phi)], axis=1)
    return validate_and_normalize(points, align_rotation=True, closed=True)


def random_open_curve(rng, n_s: int) -> PlanarCurve:
    """Smooth random open curve built from a slowly turning direction field."""
    turn = rng.normal(0.0, 0.3, size=n_s - 2)
    angles = np.concatenate([[0.0], np.cumsum(turn)])
    speeds = rng.uniform(0.5, 1.5, size=n_s - 1)
    steps = speeds[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    points = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])
    return validate_and_normalize(points, align_rotation=True, closed=False)


def random_curve(rng, n_s: int) -> PlanarCurve:
    if rng.random() < 0.5:
        return random_closed_curve(rng, n_s)
    return random_open_curve(rng, n_s)


def random_deformation(rng, n_s: int, scale: float = 1.0) -> np.ndarray:
    """Smooth random per-point displacement field (sum of a few sinusoids)."""
    s = np.linspace(0.0, 1.0, n_s)
    field = np.zeros((n_s, 2))
    for _ in range(3):
        freq = rng.integers(1, 5)
        for dim in range(2):
            field[:, dim] += rng.normal(0, scale) * np.sin(
                np.pi * freq * s + rng.uniform(0, 2 * np.pi))
    return field
