import json
import math

import numpy as np
import pytest

from qvtmaps import hypkernel as hk
from qvtmaps import jsonfmt
from qvtmaps.hypkernel import HPoint, Isometry
from qvtmaps.poincare import (
    FundamentalPolygon,
    NonClosingCycle,
    NotHyperbolic,
    SidePairing,
    build_fundamental_polygon,
    build_kite,
    expected_cycles,
    trace_cycles,
    vt_obstruction_p33,
)
from qvtmaps.vertex_type import VertexType, analyze_type


@pytest.mark.parametrize("p", [5, 7, 9, 11])
def test_kite_angles_and_area(p):
    dk = build_kite(p)
    got = dk.kite.angles()
    want = [2 * math.pi / p, 2 * math.pi / p, 2 * math.pi / 3, 2 * math.pi / p]
    assert got == pytest.approx(want, abs=1e-9)
    assert dk.kite.area() == pytest.approx(2 * math.pi - 6 * math.pi / p - 2 * math.pi / 3, abs=1e-9)


def test_kite_area_p5():
    assert build_kite(5).kite.area() == pytest.approx(2 * math.pi / 15, abs=1e-9)


@pytest.mark.parametrize("p", [5, 7, 9])
def test_kite_sides_are_inradius_sums(p):
    dk = build_kite(p)
    assert dk.kite.side_lengths() == pytest.approx(dk.target_side_lengths(), abs=1e-9)


@pytest.mark.parametrize("p", [5, 7])
def test_kite_sides_pass_through_edge_midpoints(p):
    # each kite side passes through the midpoint of the edge it crosses
    dk = build_kite(p)
    ta = analyze_type(VertexType.p33(p))
    c = dk.kite.corners
    start = 0.0
    for i, k in enumerate(dk.kite.sizes[:-1]):
        start += ta.metrics[k].theta
        mid = HPoint.from_polar(ta.edge_length / 2, start)
        assert hk.distance_to_geodesic(mid, c[i], c[i + 1]) < 1e-9


@pytest.mark.parametrize("p", [3, 4, 6, 8])
def test_kite_rejects_bad_p(p):
    with pytest.raises(NotHyperbolic):
        build_kite(p)


@pytest.mark.parametrize("p", [5, 7, 9, 11])
def test_fundamental_polygon_structure(p):
    f = build_fundamental_polygon(p)
    assert f.n == 2 * p + 2
    assert len(f.pairings) == p + 1
    assert len(f.kites) == p
    for pr in f.pairings:
        assert f.side_length(pr.source) == pytest.approx(f.side_length(pr.target), abs=1e-9)
        assert f.pairing_defect(pr) < 1e-9
        # entries grow with p, so the form is checked relative to their size
        assert pr.isometry.relative_form_defect() < 1e-13
        if p <= 7:
            assert pr.isometry.form_defect() < 1e-10
    sides = sorted(s for pr in f.pairings for s in (pr.source, pr.target))
    assert sides == list(range(f.n))
    assert f.is_simple()


@pytest.mark.parametrize("p", [5, 7, 9])
def test_kites_fill_the_center(p):
    f = build_fundamental_polygon(p)
    total = sum(k.angles()[0] for k in f.kites)
    assert total == pytest.approx(2 * math.pi, abs=1e-9)
    for k in f.kites:
        assert np.allclose(k.corners[0].coords, f.center.coords, atol=1e-9)


@pytest.mark.parametrize("p", [5, 7])
def test_placements_carry_the_seed(p):
    f = build_fundamental_polygon(p)
    seed = f.kites[(p - 1) // 2 - 1]
    for k, g in zip(f.kites, f.placements):
        moved = seed.moved(g)
        got = sorted(tuple(np.round(c.coords, 8)) for c in moved.corners)
        want = sorted(tuple(np.round(c.coords, 8)) for c in k.corners)
        assert got == want


def test_cycle_partition_p5():
    f = build_fundamental_polygon(5)
    rep = trace_cycles(f)
    cells = {frozenset(c.members) for c in rep.cycles}
    assert cells == {
        frozenset({"v2", "v7"}), frozenset({"v3", "v5", "v6"}), frozenset({"v8", "v9", "v1"}),
        frozenset({"v5'"}), frozenset({"v8'"}), frozenset({"v4"}), frozenset({"v10"}),
    }
    assert rep.partition_ok(f.labels)


@pytest.mark.parametrize("p", [5, 7, 9, 11])
def test_cycles_are_proper(p):
    rep = trace_cycles(build_fundamental_polygon(p))
    assert rep.partition_ok(build_fundamental_polygon(p).labels)
    for c in rep.cycles:
        assert abs(c.residual) < 1e-8
        assert c.verdict in ("MATCH", "MISMATCH")


@pytest.mark.parametrize("p", [5, 7, 9])
def test_cycle_measurements(p):
    rep = trace_cycles(build_fundamental_polygon(p))
    by_first = {c.members[0]: c for c in rep.cycles}
    assert by_first[f"v{p}'"].measured_sum == pytest.approx(math.pi, abs=1e-9)
    assert by_first[f"v{p + 3}'"].measured_sum == pytest.approx(math.pi, abs=1e-9)
    multi = [c for c in rep.cycles if len(c.members) > 1]
    assert len(multi) == 3
    for c in multi:
        assert c.measured_sum == pytest.approx(2 * math.pi, abs=1e-9)
        assert c.verdict == "MATCH"
    singles = [c for c in rep.cycles if len(c.members) == 1 and "'" not in c.members[0]]
    assert len(singles) == p - 3
    for c in singles:
        # the lone corners are triangle incenters: three copies fit around them
        assert c.nearest_m == 3
        assert c.measured_sum == pytest.approx(2 * math.pi / 3, abs=1e-9)
        assert c.verdict == "MISMATCH"


def test_expected_cycles_cover_every_vertex():
    for p in (5, 7, 9):
        f = build_fundamental_polygon(p)
        labels = sorted(m for mem, _, _ in expected_cycles(p) for m in mem)
        assert labels == sorted(f.labels)


def test_report_json_is_deterministic():
    a = jsonfmt.dumps(trace_cycles(build_fundamental_polygon(5)).to_dict())
    b = jsonfmt.dumps(trace_cycles(build_fundamental_polygon(5)).to_dict())
    assert a == b
    doc = json.loads(a)
    assert list(doc) == ["p", "boundary_vertex_count", "labeling", "pairings", "cycles",
                         "all_proper", "all_match"]
    assert set(doc["cycles"][0]) >= {"members", "measured_sum", "nearest_m", "residual",
                                     "expected", "verdict"}
    assert len(doc["pairings"][0]["matrix"]) == 3


def test_broken_pairing_does_not_close():
    square = tuple(HPoint.from_polar(1.0, math.pi / 2 * i) for i in range(4))
    g = Isometry.identity()
    pairings = (
        SidePairing(0, 1, g, ((0, 1), (1, 1))),  # not a bijection on corners
        SidePairing(2, 3, g, ((2, 0), (3, 3))),
    )
    f = FundamentalPolygon(4, square, ("a", "b", "c", "d"), pairings)
    with pytest.raises(NonClosingCycle):
        trace_cycles(f)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_obstructed(p):
    assert vt_obstruction_p33(p).obstructed


@pytest.mark.parametrize("p", [9, 12, 15])
def test_not_obstructed(p):
    ob = vt_obstruction_p33(p)
    assert not ob.obstructed
    assert (ob.edge_contacts, ob.vertex_contacts) == (p // 3, p // 3)


def test_obstruction_residues():
    assert "1 (mod 6)" in vt_obstruction_p33(7).note
    assert "5 (mod 6)" in vt_obstruction_p33(5).note
    with pytest.raises(ValueError):
        vt_obstruction_p33(3)
