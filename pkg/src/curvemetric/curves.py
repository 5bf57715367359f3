"""Discrete planar curves: validation, normalization, differentiation, and the
elastic inner product on curve deformations.

A curve is an ordered array of 2D sampling points on the parameter interval
[0, 1]. Cell outlines are closed, but the closing segment (last point back to
the first) is kept implicit: it contributes to the total length used for
normalization and to nothing else. All derivative-based quantities live on the
n_s - 1 explicit segments, with parameter step ds = 1/(n_s - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSegment,
    NonFiniteCoordinate,
    NonPositiveA,
    ShapeMismatch,
    TooFewPoints,
)

# Segments shorter than this are treated as duplicate points.
SEGMENT_EPS = 1e-12


def _as_points(raw) -> np.ndarray:
    pts = np.asarray(raw, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ShapeMismatch(f"expected an (n, 2) array of points, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class PlanarCurve:
    """Ordered 2D sampling points of one outline.

    ``closed`` marks conceptually closed outlines; the closing segment stays
    implicit (it is never appended to ``points``).
    """

    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = _as_points(self.points)
        if len(pts) < 3:
            raise TooFewPoints(f"a curve needs at least 3 points, got {len(pts)}")
        if not np.isfinite(pts).all():
            raise NonFiniteCoordinate("curve contains NaN or infinite coordinates")
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if self.closed:
            seg = np.append(seg, np.linalg.norm(pts[0] - pts[-1]))
        if (seg < SEGMENT_EPS).any():
            k = int(np.argmax(seg < SEGMENT_EPS))
            raise DegenerateSegment(f"consecutive duplicate points at segment {k}")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def total_length(self) -> float:
        """Polyline length, including the implicit closing segment when closed."""
        seg = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        length = float(seg.sum())
        if self.closed:
            length += float(np.linalg.norm(self.points[0] - self.points[-1]))
        return length

    def translated(self, offset) -> "PlanarCurve":
        return PlanarCurve(self.points + np.asarray(offset, dtype=float), closed=self.closed)


@dataclass(frozen=True)
class VelocityField:
    """Discrete derivative of a curve: per-segment velocity vectors c'_k,
    their magnitudes, and sequentially unwrapped tangent angles."""

    vectors: np.ndarray    # (n_s - 1, 2)
    magnitudes: np.ndarray  # (n_s - 1,)
    angles: np.ndarray      # (n_s - 1,), radians, unwrapped
    ds: float

    def __post_init__(self):
        for name in ("vectors", "magnitudes", "angles"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_segments(self) -> int:
        return len(self.vectors)


def validate_and_normalize(raw_points, align_rotation: bool = False,
                           closed: bool = True) -> PlanarCurve:
    """Validate raw coordinates and quotient out translation and scale.

    The result is centered at its centroid and scaled to total length 1.
    With ``align_rotation`` the curve is additionally rotated so its first
    segment points along +x, which also pins the angle branch used by the
    forward transform. The operation is idempotent.
    """
    pts = _as_points(raw_points)
    if len(pts) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(pts)}")
    if not np.isfinite(pts).all():
        raise NonFiniteCoordinate("input contains NaN or infinite coordinates")

    pts = pts - pts.mean(axis=0)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    length = seg.sum()
    if closed:
        length = length + np.linalg.norm(pts[0] - pts[-1])
    if length < SEGMENT_EPS:
        raise DegenerateSegment("curve has zero total length")
    pts = pts / length

    if align_rotation:
        first = pts[1] - pts[0]
        phi = np.arctan2(first[1], first[0])
        c, s = np.cos(phi), np.sin(phi)
        # right-multiplying row vectors by R(phi) rotates them by -phi
        pts = pts @ np.array([[c, -s], [s, c]])

    return PlanarCurve(pts, closed=closed)


def derivative(curve: PlanarCurve) -> VelocityField:
    """Forward-difference velocity field over the n_s - 1 explicit segments.

    The closing segment of a closed curve is not appended, so the transform
    space downstream has one fewer sample than the curve. Angles start from
    the principal value of the first segment and are unwrapped so that no
    consecutive step exceeds pi in magnitude.
    """
    n = curve.n_points
    ds = 1.0 / (n - 1)
    vectors = np.diff(curve.points, axis=0) / ds
    magnitudes = np.linalg.norm(vectors, axis=1)
    if (magnitudes < SEGMENT_EPS).any():
        k = int(np.argmax(magnitudes < SEGMENT_EPS))
        raise DegenerateSegment(f"velocity vanishes at segment {k}")
    angles = np.unwrap(np.arctan2(vectors[:, 1], vectors[:, 0]))
    return VelocityField(vectors=vectors, magnitudes=magnitudes, angles=angles, ds=ds)


def elastic_inner_product(curve: PlanarCurve, h, k, a: float, b: float) -> float:
    """Elastic inner product of two deformation fields h, k at ``curve``.

    h and k are per-point displacement arrays with the curve's sampling.
    Their arclength derivatives are split into normal and tangential parts,
    weighted a^2 and b^2, and integrated over arclength:

        a^2 sum <D_s h, N><D_s k, N> |c'| ds  +  b^2 sum <D_s h, T><D_s k, T> |c'| ds

    with D_s f = f' / |c'| per segment and ds = 1/(n_s - 1).
    """
    if a <= 0:
        raise NonPositiveA(f"stretching weight must be positive, got {a}")
    if b <= 0:
        raise NonPositiveA(f"bending weight must be positive, got {b}")
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    if h.shape != curve.points.shape or k.shape != curve.points.shape:
        raise ShapeMismatch(
            f"deformations must match the curve sampling {curve.points.shape}, "
            f"got {h.shape} and {k.shape}"
        )
    vf = derivative(curve)
    tangent = vf.vectors / vf.magnitudes[:, None]
    normal = np.stack([-tangent[:, 1], tangent[:, 0]], axis=1)

    dsh = np.diff(h, axis=0) / vf.ds / vf.magnitudes[:, None]
    dsk = np.diff(k, axis=0) / vf.ds / vf.magnitudes[:, None]

    weight = vf.magnitudes * vf.ds  # arclength element per segment
    normal_part = np.sum((dsh * normal).sum(axis=1) * (dsk * normal).sum(axis=1) * weight)
    tangent_part = np.sum((dsh * tangent).sum(axis=1) * (dsk * tangent).sum(axis=1) * weight)
    return float(a * a * normal_part + b * b * tangent_part)


def load_curve_points(path) -> np.ndarray:
    """Read raw curve points from a JSON array of [x, y] pairs or a 2-column
    CSV (header optional). Returns the unnormalized (n, 2) array."""
    import json
    from pathlib import Path

    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("["):
        return _as_points(json.loads(text))
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            rows.append([float(cells[0]), float(cells[1])])
        except (ValueError, IndexError):
            if rows:
                raise NonFiniteCoordinate(f"unparseable CSV row: {line!r}")
            continue  # header line
    return _as_points(rows)


def load_curve(path, align_rotation: bool = False, closed: bool = True) -> PlanarCurve:
    """Load a curve file and normalize it (see ``validate_and_normalize``)."""
    return validate_and_normalize(load_curve_points(path),
                                  align_rotation=align_rotation, closed=closed)
