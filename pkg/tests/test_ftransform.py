import numpy as np
import pytest

from curvemetric.curves import PlanarCurve, derivative, elastic_inner_product
from curvemetric.errors import MetricMismatch, NonPositiveA, ShapeMismatch, ZeroSample
from curvemetric.ftransform import FPoint, f_distance, f_forward, f_inverse
from helpers import random_curve, random_deformation


def horizontal_segment(n=5):
    s = np.linspace(0.0, 1.0, n)
    return PlanarCurve(np.stack([s, np.zeros(n)], axis=1))


def test_unit_speed_horizontal_segment_maps_to_ones():
    vf = derivative(horizontal_segment())
    for a in (0.3, 1.0, 2.0, 4.5):
        q = f_forward(vf, a)
        assert np.allclose(q.samples, [[1.0, 0.0]] * 4, atol=1e-15)


def test_vertical_segment_angle_scaling():
    vf = derivative(PlanarCurve(np.array([[0.0, 0.0], [0.0, 0.5], [0.0, 1.0]])))
    assert np.allclose(vf.angles, np.pi / 2)
    assert np.allclose(f_forward(vf, 1.0).samples, [[0.0, 1.0]] * 2, atol=1e-15)
    assert np.allclose(f_forward(vf, 2.0).samples, [[-1.0, 0.0]] * 2, atol=1e-15)


def test_a1_equals_srv_representative():
    # independent oracle: classical square-root-velocity computed directly
    # from coordinate differences, componentwise
    rng = np.random.default_rng(42)
    for _ in range(20):
        curve = random_curve(rng, int(rng.integers(10, 50)))
        q = f_forward(derivative(curve), 1.0)
        velocity = np.diff(curve.points, axis=0) * (curve.n_points - 1)
        speed = np.linalg.norm(velocity, axis=1)
        srv = velocity / np.sqrt(speed)[:, None]
        assert np.abs(q.samples - srv).max() < 1e-12


def test_roundtrip_identity():
    rng = np.random.default_rng(7)
    for _ in range(20):
        curve = random_curve(rng, int(rng.integers(10, 60)))
        q = f_forward(derivative(curve), 1.0)
        back = f_inverse(q, curve.points[0])
        assert np.abs(back.points - curve.points).max() < 1e-10


@pytest.mark.parametrize("a", [0.2, 1.0, 3.0])
def test_roundtrip_random_a(a):
    rng = np.random.default_rng(int(a * 100))
    for _ in range(25):
        curve = random_curve(rng, int(rng.integers(12, 50)))
        q = f_forward(derivative(curve), a)
        back = f_inverse(q, curve.points[0])
        assert np.abs(back.points - curve.points).max() < 1e-9


def test_constant_samples_invert_to_straight_segment():
    q = FPoint(samples=np.ones((4, 2)) * [1.0, 0.0], a=1.0, ds=0.25)
    curve = f_inverse(q, (0.0, 0.0))
    expected = np.stack([np.linspace(0, 1, 5), np.zeros(5)], axis=1)
    assert np.allclose(curve.points, expected, atol=1e-15)


def test_rotation_equivariance():
    # rotating the curve by phi rotates every transform sample by a*phi
    rng = np.random.default_rng(13)
    curve = random_curve(rng, 30)
    a, phi = 0.7, 0.37
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    rotated = PlanarCurve(curve.points @ rot.T, closed=curve.closed)
    q = f_forward(derivative(curve), a)
    q_rot = f_forward(derivative(rotated), a)
    rot_a = np.array([[np.cos(a * phi), -np.sin(a * phi)],
                      [np.sin(a * phi), np.cos(a * phi)]])
    assert np.abs(q_rot.samples - q.samples @ rot_a.T).max() < 1e-12


def test_pullback_isometry_first_order():
    # ||F(c + eps h) - F(c)||^2 / eps^2 approaches the elastic inner product
    # g(h, h) with bending weight 0.5, at first order in eps
    rng = np.random.default_rng(99)
    for _ in range(10):
        n = int(rng.integers(15, 40))
        curve = random_curve(rng, n)
        h = random_deformation(rng, n, scale=0.05)
        a = rng.uniform(0.3, 2.0)
        g = elastic_inner_product(curve, h, h, a, 0.5)
        errs = []
        for eps in (1e-3, 1e-4):
            q0 = f_forward(derivative(curve), a)
            q1 = f_forward(derivative(PlanarCurve(curve.points + eps * h)), a)
            ratio = f_distance(q1, q0) ** 2 / eps ** 2
            errs.append(abs(ratio - g))
        assert errs[1] < 0.3 * errs[0] + 1e-12


def test_f_distance_basics():
    q_zero = FPoint(samples=np.zeros((9, 2)), a=1.0, ds=1 / 9)
    q_one = FPoint(samples=np.tile([1.0, 0.0], (9, 1)), a=1.0, ds=1 / 9)
    assert f_distance(q_one, q_one) == 0.0
    assert f_distance(q_zero, q_one) == pytest.approx(1.0, rel=1e-15)


def test_f_distance_triangle_inequality():
    rng = np.random.default_rng(31)
    for _ in range(30):
        qs = [FPoint(samples=rng.normal(size=(7, 2)), a=0.9, ds=1 / 7) for _ in range(3)]
        d01 = f_distance(qs[0], qs[1])
        d12 = f_distance(qs[1], qs[2])
        d02 = f_distance(qs[0], qs[2])
        assert d02 <= d01 + d12 + 1e-12


def test_f_distance_mismatches():
    q1 = FPoint(samples=np.ones((5, 2)), a=1.0, ds=0.2)
    q2 = FPoint(samples=np.ones((6, 2)), a=1.0, ds=1 / 6)
    q3 = FPoint(samples=np.ones((5, 2)), a=0.5, ds=0.2)
    with pytest.raises(ShapeMismatch):
        f_distance(q1, q2)
    with pytest.raises(MetricMismatch):
        f_distance(q1, q3)


def test_zero_sample_rejected_by_inverse():
    samples = np.ones((5, 2))
    samples[2] = [0.0, 1e-13]
    q = FPoint(samples=samples, a=1.0, ds=0.2)
    with pytest.raises(ZeroSample):
        f_inverse(q, (0.0, 0.0))


def test_nonpositive_a_rejected():
    vf = derivative(horizontal_segment())
    with pytest.raises(NonPositiveA):
        f_forward(vf, 0.0)
    with pytest.raises(NonPositiveA):
        f_forward(vf, -1.0)
    with pytest.raises(NonPositiveA):
        FPoint(samples=np.ones((3, 2)), a=0.0, ds=0.5)


def test_fpoint_json_dict():
    q = FPoint(samples=np.array([[1.0, 2.0], [3.0, 4.0]]), a=0.7, ds=0.5)
    d = q.to_json_dict()
    assert d == {"a": 0.7, "samples": [[1.0, 2.0], [3.0, 4.0]]}
