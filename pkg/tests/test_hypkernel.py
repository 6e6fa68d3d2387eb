import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qvtmaps import hypkernel as hk
from qvtmaps.hypkernel import HPoint, Isometry

radii = st.floats(min_value=0.0, max_value=3.0)
angles = st.floats(min_value=-math.pi, max_value=math.pi)
points = st.builds(HPoint.from_polar, radii, angles)


def pairs_far_apart(a, b):
    return hk.distance(a, b) > 1e-3


def test_distance_to_self_is_zero():
    o = HPoint.from_polar(1.3, 0.4)
    assert hk.distance(o, o) == 0.0


@given(points, points)
def test_distance_symmetric(a, b):
    assert hk.distance(a, b) == pytest.approx(hk.distance(b, a), abs=1e-12)


def test_translation_moves_origin_by_d():
    # boost(d) puts the origin at height cosh(d) on the axis
    o = HPoint.origin()
    q = hk.translate(o, 1.0)
    assert q.z == pytest.approx(math.cosh(1.0), abs=1e-12)
    assert hk.distance(o, q) == pytest.approx(1.0, abs=1e-10)


@given(points, angles, st.floats(min_value=0.0, max_value=4.0))
def test_points_stay_on_sheet(p, ang, d):
    q = hk.rotate_about(p, ang).apply(hk.translate(p, d, ang))
    assert q.norm_defect() < 1e-12 * max(1.0, q.z ** 2)
    assert q.z >= 1.0


@given(points, points)
def test_reflection_is_orientation_reversing_involution(a, b):
    if not pairs_far_apart(a, b):
        return
    r = hk.reflect_across(a, b)
    assert r.parity == -1
    assert (r @ r).is_identity(1e-9)
    for p in (a, b):
        assert np.allclose(r.apply(p).coords, p.coords, atol=1e-9)


def test_reflection_fixes_axis():
    a = HPoint.from_polar(0.7, 0.3)
    b = HPoint.from_polar(1.1, 2.0)
    r = hk.reflect_across(a, b)
    direction = hk.tangent_direction(a, b)
    for t in (-2.0, -0.5, 0.25, 1.5, 3.0):
        x = hk.translate(a, t, direction) if t >= 0 else hk.translate(a, -t, direction + math.pi)
        assert hk.distance_to_geodesic(x, a, b) < 1e-10
        assert np.allclose(r.apply(x).coords, x.coords, atol=1e-10)


@given(points, points, points)
def test_reflection_preserves_distance_to_axis(a, b, x):
    if not pairs_far_apart(a, b):
        return
    r = hk.reflect_across(a, b)
    before = hk.distance_to_geodesic(x, a, b)
    after = hk.distance_to_geodesic(r.apply(x), a, b)
    assert after == pytest.approx(before, abs=1e-9)


def test_reflection_needs_two_points():
    a = HPoint.from_polar(0.5, 0.5)
    with pytest.raises(hk.DegenerateGeodesic):
        hk.reflect_across(a, a)


@given(points)
def test_half_turn_is_involution(m):
    h = hk.half_turn(m)
    assert h.parity == 1
    assert (h @ h).is_identity(1e-9)
    assert np.allclose(h.apply(m).coords, m.coords, atol=1e-9)


@given(points, points)
def test_half_turn_about_midpoint_swaps_ends(a, b):
    h = hk.half_turn(hk.midpoint(a, b))
    assert np.allclose(h.apply(a).coords, b.coords, atol=1e-9)
    assert np.allclose(h.apply(b).coords, a.coords, atol=1e-9)


@given(points, points)
def test_two_half_turns_make_a_translation(a, b):
    d = hk.distance(a, b)
    if d < 1e-2:
        return
    g = hk.half_turn(b) @ hk.half_turn(a)
    # a hyperbolic Lorentz matrix has trace 1 + 2 cosh(length) > 3
    assert g.trace() > 3.0
    assert g.trace() == pytest.approx(1 + 2 * math.cosh(2 * d), rel=1e-9)


@given(points)
def test_rotation_periodic(c):
    g = hk.rotate_about(c, 2 * math.pi / 5)
    acc = Isometry.identity()
    for _ in range(5):
        acc = g @ acc
    assert acc.is_identity(1e-9)
    assert hk.rotate_about(c, 0.0).is_identity(1e-9)


@given(points, angles, points)
def test_rotation_fixes_center_and_radius(c, ang, x):
    g = hk.rotate_about(c, ang)
    assert g.parity == 1
    assert np.allclose(g.apply(c).coords, c.coords, atol=1e-9)
    assert hk.distance(c, g.apply(x)) == pytest.approx(hk.distance(c, x), abs=1e-9)


def _random_isometry(rng):
    c = HPoint.from_polar(rng.uniform(0, 2), rng.uniform(-3, 3))
    g = hk.rotate_about(c, rng.uniform(-3, 3))
    if rng.random() < 0.5:
        a = HPoint.from_polar(rng.uniform(0, 2), rng.uniform(-3, 3))
        b = HPoint.from_polar(rng.uniform(0, 2), rng.uniform(-3, 3))
        if hk.distance(a, b) > 1e-3:
            g = hk.reflect_across(a, b) @ g
    return g


def test_isometries_preserve_distance_and_form():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = _random_isometry(rng)
        assert g.form_defect() < 1e-10
        assert g.parity == (1 if np.linalg.det(g.matrix) > 0 else -1)
        a = HPoint.from_polar(rng.uniform(0, 2), rng.uniform(-3, 3))
        b = HPoint.from_polar(rng.uniform(0, 2), rng.uniform(-3, 3))
        assert hk.distance(g(a), g(b)) == pytest.approx(hk.distance(a, b), abs=1e-10)


def test_composition_associative_and_parity_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(50):
        f, g, h = (_random_isometry(rng) for _ in range(3))
        assert ((f @ g) @ h).close_to(f @ (g @ h), 1e-10)
        assert (f @ g).parity == f.parity * g.parity
        assert (f @ f.inverse()).is_identity(1e-9)


def test_disk_round_trip():
    p = HPoint.from_disk(0.3, -0.6)
    u, v = p.to_disk()
    assert (u, v) == pytest.approx((0.3, -0.6), abs=1e-12)
    with pytest.raises(hk.GeometryError):
        HPoint.from_disk(0.8, 0.8)


def test_corner_angle_of_right_angle():
    o = HPoint.origin()
    a, b = HPoint.from_polar(1.0, 0.0), HPoint.from_polar(1.0, math.pi / 2)
    assert hk.corner_angle(a, o, b) == pytest.approx(3 * math.pi / 2, abs=1e-12)
    assert hk.corner_angle(b, o, a) == pytest.approx(math.pi / 2, abs=1e-12)


def test_right_angled_pentagon():
    m = hk.regular_polygon_metrics(5, math.pi / 2)
    expected = 2 * math.acosh(math.cos(math.pi / 5) / math.sin(math.pi / 4))
    assert m.s == pytest.approx(expected, abs=1e-12)
    assert m.s == pytest.approx(1.0613, abs=1e-4)
    assert math.cosh(m.s / 2) * math.sin(math.pi / 4) == pytest.approx(math.cos(math.pi / 5), abs=1e-10)


def test_euclidean_limit_shrinks_polygon():
    k = 6
    m = hk.regular_polygon_metrics(k, (k - 2) * math.pi / k - 1e-9)
    assert m.s < 1e-3 and m.R < 1e-3


def test_triangle_circumradius_formula():
    th = 2 * math.pi / 7
    m = hk.regular_polygon_metrics(3, th)
    assert math.cosh(m.R) == pytest.approx(1 / math.tan(math.pi / 3) / math.tan(th / 2), abs=1e-10)
    assert max(m.identity_defects()) < 1e-10


@pytest.mark.parametrize("k", range(3, 21))
def test_metric_identities_hold(k):
    upper = (k - 2) * math.pi / k
    for i in range(1, 21):
        m = hk.regular_polygon_metrics(k, upper * i / 21)
        assert max(m.identity_defects()) < 1e-10


@pytest.mark.parametrize("k,theta", [(2, 1.0), (5, 0.0), (5, 3 * math.pi / 5), (4, -1.0)])
def test_angle_out_of_range(k, theta):
    with pytest.raises(hk.AngleOutOfRange):
        hk.regular_polygon_metrics(k, theta)
