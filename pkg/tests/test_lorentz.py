import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthocover import lorentz
from orthocover.lorentz import PointClass


def test_bilinear_examples():
    assert lorentz.bilinear((1, 0, 0, 0), (1, 0, 0, 0)) == -1.0
    assert lorentz.bilinear((1, 0, 0, 1), (1, 0, 0, 1)) == 0.0
    assert lorentz.bilinear((1, 0, 0, 0), (1, 0, 0, 0.5)) == -1.0


def test_bilinear_dimension_mismatch():
    with pytest.raises(ValueError):
        lorentz.bilinear((1, 0, 0), (1, 0, 0, 0))


def test_classify():
    assert lorentz.classify((1, 0, 0, 0)) is PointClass.PROPER
    assert lorentz.classify((1, 0, 0, 1)) is PointClass.IDEAL
    assert lorentz.classify((1, 0, 1 / 0.7, 0)) is PointClass.OUTER
    assert lorentz.classify((3, 0, 0, 3)) is PointClass.IDEAL


def test_distance_examples():
    assert lorentz.distance((1, 0, 0, 0), (1, 0, 0, 0)) == 0.0
    d = lorentz.distance((1, 0, 0, 0), (1, 0, 0, 0.5))
    assert d == pytest.approx(math.atanh(0.5), abs=1e-15)
    assert d == pytest.approx(math.acosh(1 / math.sqrt(0.75)), abs=1e-15)


def test_distance_rejects_ideal():
    with pytest.raises(ValueError):
        lorentz.distance((1, 0, 0, 1), (1, 0, 0, 0))


def test_polar_of_outer_vertex_2d():
    a = 0.4
    A2 = lorentz.vec(1, 1 / a, 0)
    u = lorentz.polar(A2)
    assert lorentz.on_plane(lorentz.vec(1, a, 0), u)
    # as a Euclidean covector the line is J u, proportional to (1, -1/a, 0)
    J = np.diag([-1.0, 1.0, 1.0])
    assert np.allclose(-(J @ u), [1, -1 / a, 0])


def test_polar_of_a3_contains_base(orth736):
    u = orth736.truncating_plane
    for P in (orth736.P0, orth736.P1, orth736.P2):
        assert lorentz.on_plane(P, u, 1e-10)


def test_point_plane_distance():
    plane = (0, 0, 0, 1)
    assert lorentz.point_plane_distance((1, 0, 0, 0), plane) == 0.0
    d = lorentz.point_plane_distance((1, 0, 0, 0.5), plane)
    assert d == pytest.approx(lorentz.distance((1, 0, 0, 0.5), (1, 0, 0, 0)), abs=1e-15)


def test_angle_at_right_angle():
    assert lorentz.angle_at((1, 0, 0, 0), (1, 0.3, 0, 0), (1, 0, 0.2, 0)) == pytest.approx(math.pi / 2)


ball_point = st.tuples(*[st.floats(-0.55, 0.55)] * 3).map(lambda p: lorentz.homogeneous(np.array(p)))


@settings(max_examples=200, deadline=None)
@given(ball_point, ball_point, ball_point)
def test_triangle_inequality(x, y, z):
    dxy, dyz, dxz = lorentz.distance(x, y), lorentz.distance(y, z), lorentz.distance(x, z)
    assert dxz <= dxy + dyz + 1e-12


@settings(max_examples=100, deadline=None)
@given(ball_point, ball_point, st.floats(0.1, 10), st.floats(-10, -0.1))
def test_scale_invariance(x, y, lam, mu):
    assert lorentz.distance(lam * x, mu * y) == pytest.approx(lorentz.distance(x, y), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(ball_point, ball_point)
def test_cosh_argument_at_least_one(x, y):
    x, y = lorentz.normalize(x), lorentz.normalize(y)
    assert lorentz.bilinear(x, y) ** 2 >= lorentz.norm2(x) * lorentz.norm2(y) * (1 - 1e-12)
