import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qvtmaps.vertex_type import (
    InvalidVertexType,
    VertexType,
    analyze_type,
    angle_sum_at,
    canonical_cycle,
    classify,
)

cycles = st.lists(st.integers(min_value=3, max_value=12), min_size=3, max_size=8)


@given(cycles)
def test_canonical_form_idempotent(seq):
    c = canonical_cycle(seq)
    assert canonical_cycle(c) == c


@given(cycles, st.integers(min_value=0, max_value=7), st.booleans())
def test_canonical_form_ignores_rotation_and_mirror(seq, shift, flip):
    s = seq[shift % len(seq):] + seq[:shift % len(seq)]
    if flip:
        s = s[::-1]
    assert VertexType(tuple(s)) == VertexType(tuple(seq))


def test_mirror_images_agree():
    assert VertexType((5, 5, 3, 5)) == VertexType((3, 5, 5, 5))
    assert VertexType((5, 5, 3, 5)).faces == (3, 5, 5, 5)
    assert str(VertexType.parse("[5,5,5,3]")) == "[3,5,5,5]"


@pytest.mark.parametrize("bad", [(3, 3), (2, 5, 5), ()])
def test_invalid_types(bad):
    with pytest.raises(InvalidVertexType):
        VertexType(bad)


def test_parse_rejects_junk():
    with pytest.raises(InvalidVertexType):
        VertexType.parse("5,x,5")


def test_classes_are_exact():
    assert analyze_type(VertexType((4, 4, 4, 4))).curvature_class == "euclidean"
    assert analyze_type(VertexType((3, 6, 3, 6))).curvature_class == "euclidean"
    assert analyze_type(VertexType((3, 3, 3, 3))).curvature_class == "spherical"
    assert VertexType((3, 3, 3, 3)).alpha() == Fraction(4, 3)
    assert classify(Fraction(2)) == "euclidean"
    assert analyze_type(VertexType((4, 4, 4, 4))).edge_length is None


def test_type_5553():
    ta = analyze_type(VertexType((5, 5, 5, 3)))
    assert ta.alpha == Fraction(32, 15)
    assert ta.curvature_class == "hyperbolic"
    assert ta.edge_length == pytest.approx(0.618, abs=2e-3)
    assert abs(angle_sum_at((5, 5, 5, 3), ta.edge_length) - 2 * math.pi) < 1e-12
    assert ta.angle_residual() < 1e-10
    assert ta.to_dict()["alpha"] == "32/15"


HYPERBOLIC = [(5, 5, 5, 3), (7, 7, 7, 3), (4, 4, 4, 4, 4), (3, 3, 3, 3, 3, 3, 3), (4, 6, 10), (3, 8, 3, 8)]


@pytest.mark.parametrize("faces", HYPERBOLIC)
def test_angle_sum_strictly_decreasing(faces):
    t = VertexType(faces)
    assert angle_sum_at(t.faces, 0.0) == pytest.approx(math.pi * float(t.alpha()), abs=1e-12)
    grid = [10.0 * i / 100 for i in range(101)]
    vals = [angle_sum_at(t.faces, s) for s in grid]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("faces", HYPERBOLIC)
def test_metrics_share_the_edge(faces):
    ta = analyze_type(VertexType(faces))
    for m in ta.metrics.values():
        assert m.s == pytest.approx(ta.edge_length, abs=1e-10)
        assert max(m.identity_defects()) < 1e-10
