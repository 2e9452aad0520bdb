"""Superellipse geometry: parameterization, implicit surface, transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fd_gradient
from hmp import geometry as ge
from hmp import hyperdual as hm


def test_sq_radius_on_axis_is_half_extent_any_eps():
    # r(0) = a1 regardless of roundness
    for eps in (0.2, 0.5, 1.0, 1.7, 2.0):
        s = ge.Superellipse(0.02, 0.11, eps)
        assert ge.sq_radius(s, 0.0) == pytest.approx(0.02, rel=1e-12)
        assert ge.sq_radius(s, math.pi / 2) == pytest.approx(0.11, rel=1e-12)


def test_sq_radius_ellipse_semi_axis():
    s = ge.Superellipse(1.0, 2.0, 1.0)
    assert ge.sq_radius(s, math.pi / 2) == pytest.approx(2.0, rel=1e-12)


def test_sq_point_unit_circle():
    s = ge.Superellipse(1.0, 1.0, 1.0)
    p = ge.sq_point(s, 0.0)
    assert p[0] == pytest.approx(1.0, rel=1e-12)
    assert p[1] == pytest.approx(0.0, abs=1e-12)


def test_sq_point_on_surface_squarish():
    s = ge.Superellipse(1.0, 1.0, 0.5)
    p = ge.sq_point(s, math.pi / 4)
    assert ge.inside_outside(s, p) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    gamma=st.floats(-math.pi, math.pi),
    eps=st.floats(0.2, 2.0),
    a1=st.floats(0.01, 2.0),
    a2=st.floats(0.01, 2.0),
)
def test_sq_point_always_on_surface(gamma, eps, a1, a2):
    s = ge.Superellipse(a1, a2, eps)
    assert abs(ge.inside_outside(s, ge.sq_point(s, gamma))) <= 1e-9


def test_inside_outside_center_and_signs():
    s = ge.Superellipse(1.0, 1.0, 1.0)
    assert ge.inside_outside(s, (0.0, 0.0)) == -1.0
    assert ge.inside_outside(s, (0.5, 0.0)) < 0.0
    assert ge.inside_outside(s, (2.0, 0.0)) > 0.0


def test_inside_outside_quadrant_symmetry(rng):
    s = ge.Superellipse(0.02, 0.11, 0.2)
    for _ in range(50):
        x, y = rng.uniform(-0.2, 0.2, size=2)
        f = ge.inside_outside(s, (x, y))
        assert f == ge.inside_outside(s, (-x, y))
        assert f == ge.inside_outside(s, (x, -y))
        assert f == ge.inside_outside(s, (-x, -y))


def test_inside_outside_monotone_along_rays(rng):
    s = ge.Superellipse(0.02, 0.11, 0.35)
    for _ in range(25):
        ang = rng.uniform(-math.pi, math.pi)
        direction = (math.cos(ang), math.sin(ang))
        ts = np.linspace(0.01, 0.4, 30)
        vals = [ge.inside_outside(s, (t * direction[0], t * direction[1])) for t in ts]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_corner_world_hand_rotation():
    # 90 degree turn: body (+a1, +a2) lands at (-a2, a1) plus translation
    shape = ge.Superellipse(0.02, 0.11, 0.2)
    pose = ge.Pose2(1.0, 2.0, math.pi / 2)
    cx, cy = ge.corner_world(pose, shape, ge.CornerId(1, 1))
    assert cx == pytest.approx(1.0 - 0.11, abs=1e-15)
    assert cy == pytest.approx(2.0 + 0.02, abs=1e-15)


def test_corners_are_rectangle_vertices_not_surface_points():
    shape = ge.Superellipse(0.02, 0.11, 0.2)
    pose = ge.Pose2(0.0, 0.0, 0.0)
    cx, cy = ge.corner_world(pose, shape, ge.CornerId(-1, -1))
    assert (cx, cy) == (-0.02, -0.11)
    # a rectangle vertex lies strictly outside the rounded surface
    assert ge.inside_outside(shape, (cx, cy)) > 0.0


def test_se2_roundtrip(rng):
    for _ in range(20):
        pose = ge.Pose2(*rng.uniform(-1, 1, size=3))
        p = tuple(rng.uniform(-1, 1, size=2))
        w = ge.se2_transform(pose, p)
        b = ge.se2_inverse_transform(pose, w)
        assert b[0] == pytest.approx(p[0], abs=1e-12)
        assert b[1] == pytest.approx(p[1], abs=1e-12)


def test_sq_radius_derivatives_match_fd():
    s = ge.Superellipse(0.02, 0.11, 0.2)

    def f(v):
        return ge.sq_radius(s, v[0])

    for g0 in (0.3, 1.0, 1.2, 2.9, -2.0):
        (gv,) = hm.seed([g0])
        r = ge.sq_radius(s, gv)
        grad = fd_gradient(f, np.array([g0]), h=1e-6)
        assert r.g[0] == pytest.approx(grad[0], rel=1e-6, abs=1e-10)


def test_shape_validation():
    with pytest.raises(ValueError):
        ge.Superellipse(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ge.Superellipse(1.0, 1.0, 2.5)
    with pytest.raises(ValueError):
        ge.CornerId(0, 1)
