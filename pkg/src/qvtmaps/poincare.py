"""Dual kites, the fundamental polygon F(p) for type [p,p,p,3], and cycle checks.

The kite is the quadrilateral joining the incenters of the four faces
around one vertex of a [p,p,p,3] tiling.  ``p`` kites placed around a
p-gon incenter form a 2p-gon; declaring the midpoints of its two p-p sides
as extra vertices gives a (2p+2)-gon with p+1 side pairings.

Boundary labels follow the pairing list: ``v_1, v_2, v_3`` are the three
outer corners of the seed kite (``v_2`` is its triangle incenter) and labels
increase counterclockwise.  ``v_{p+2}`` is the triangle incenter shared by
the two half-turned kites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import hypkernel as hk
from .hypkernel import HPoint, Isometry
from .vertex_type import VertexType, analyze_type

TWO_PI = 2 * math.pi


class NotHyperbolic(ValueError):
    """Raised when p does not give a hyperbolic odd [p,p,p,3] configuration."""


class NonClosingCycle(RuntimeError):
    pass


def _check_p(p: int) -> None:
    if not isinstance(p, int) or p < 5 or p % 2 == 0:
        raise NotHyperbolic(f"the F(p) construction needs p odd and p >= 5, got {p!r}")
    if analyze_type(VertexType.p33(p)).curvature_class != "hyperbolic":
        raise NotHyperbolic(f"[{p},{p},{p},3] is not hyperbolic")


@dataclass(frozen=True)
class Kite:
    """Quadrilateral in counterclockwise order ``(center, first, opposite, last)``.

    ``center`` is the incenter around which the kites of F(p) are arranged;
    ``sizes`` records the face size whose incenter sits at each corner.
    """

    corners: tuple[HPoint, HPoint, HPoint, HPoint]
    sizes: tuple[int, int, int, int]

    def moved(self, g: Isometry) -> Kite:
        pts = tuple(g.apply(c) for c in self.corners)
        if g.parity < 0:
            # reflections reverse the cyclic order; keep the center first
            pts = (pts[0], pts[3], pts[2], pts[1])
            sizes = (self.sizes[0], self.sizes[3], self.sizes[2], self.sizes[1])
        else:
            sizes = self.sizes
        return Kite(pts, sizes)

    def angles(self) -> list[float]:
        c = self.corners
        return [hk.corner_angle(c[i - 1], c[i], c[(i + 1) % 4]) for i in range(4)]

    def side_lengths(self) -> list[float]:
        c = self.corners
        return [hk.distance(c[i], c[(i + 1) % 4]) for i in range(4)]

    def area(self) -> float:
        return hk.polygon_area(list(self.corners))

    def centroid(self) -> HPoint:
        s = sum(c.coords for c in self.corners)
        return HPoint(s / math.sqrt(-hk.minkowski(s, s)))


@dataclass(frozen=True)
class DualKite:
    p: int
    kite: Kite
    vertex: HPoint
    inradii: dict[int, float]

    @property
    def center(self) -> HPoint:
        return self.kite.corners[0]

    def target_angles(self) -> list[float]:
        return [TWO_PI / k for k in self.kite.sizes]

    def target_side_lengths(self) -> list[float]:
        s = self.kite.sizes
        return [self.inradii[s[i]] + self.inradii[s[(i + 1) % 4]] for i in range(4)]


def build_kite(p: int) -> DualKite:
    """Kite for one vertex of [p,p,p,3], with the vertex itself at the origin.

    Around the vertex the faces are, counterclockwise: the central p-gon,
    a p-gon, the triangle, a p-gon.  Each incenter sits at the face's
    circumradius along the bisector of that face's angle at the vertex.
    """
    _check_p(p)
    ta = analyze_type(VertexType.p33(p))
    mp, m3 = ta.metrics[p], ta.metrics[3]
    sizes = (p, p, 3, p)
    corners = []
    start = 0.0
    for k in sizes:
        m = mp if k == p else m3
        corners.append(HPoint.from_polar(m.R, start + m.theta / 2))
        start += m.theta
    kite = Kite(tuple(corners), sizes)
    return DualKite(p, kite, HPoint.origin(), {p: mp.r, 3: m3.r})


@dataclass(frozen=True)
class SidePairing:
    """Isometry carrying side ``source`` onto side ``target``.

    ``vertex_map`` lists the endpoint correspondence as polygon vertex
    indices, ``((a, g(a)), (b, g(b)))``.
    """

    source: int
    target: int
    isometry: Isometry
    vertex_map: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class FundamentalPolygon:
    p: int
    vertices: tuple[HPoint, ...]
    labels: tuple[str, ...]
    pairings: tuple[SidePairing, ...]
    kites: tuple[Kite, ...] = ()
    placements: tuple[Isometry, ...] = ()
    center: HPoint | None = None
    labeling_note: str = ""

    @property
    def n(self) -> int:
        return len(self.vertices)

    def side(self, i: int) -> tuple[int, int]:
        return i, (i + 1) % self.n

    def side_length(self, i: int) -> float:
        a, b = self.side(i)
        return hk.distance(self.vertices[a], self.vertices[b])

    def angle(self, i: int) -> float:
        v = self.vertices
        return hk.corner_angle(v[i - 1], v[i], v[(i + 1) % self.n])

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def side_name(self, i: int) -> str:
        return f"{self.labels[i]}-{self.labels[(i + 1) % self.n]}"

    def pairing_defect(self, pr: SidePairing) -> float:
        worst = 0.0
        for a, b in pr.vertex_map:
            img = pr.isometry.apply(self.vertices[a])
            worst = max(worst, float(abs(img.coords - self.vertices[b].coords).max()))
        return worst

    def is_simple(self) -> bool:
        """No two non-adjacent sides cross, checked on the Poincare disk."""
        pts = [v.to_disk() for v in self.vertices]
        n = len(pts)
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                    return False
        return True


def _segments_cross(a, b, c, d) -> bool:
    # straight chords suffice: geodesic arcs are monotone deformations of
    # them near the polygon and we only need a render-resolution check
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < -1e-15 and o3 * o4 < -1e-15


def _label(p: int, t: int) -> str:
    """Label of the t-th boundary corner of the 2p-gon, counting from the seed kite."""
    return f"v{(p + 3 + t) % (2 * p) + 1}"


def build_fundamental_polygon(p: int) -> FundamentalPolygon:
    dk = build_kite(p)
    m = (p - 1) // 2
    # slot i (1-based) -> kite; the seed sits at slot m
    kites: dict[int, Kite] = {m: dk.kite}
    place: dict[int, Isometry] = {m: Isometry.identity()}
    for i in range(m - 1, 0, -1):
        prev = kites[i + 1]
        g = hk.reflect_across(prev.corners[0], prev.corners[1])
        place[i] = g @ place[i + 1]
        kites[i] = prev.moved(g)
    for i in range(m + 1, p - 1):
        prev = kites[i - 1]
        g = hk.reflect_across(prev.corners[0], prev.corners[3])
        place[i] = g @ place[i - 1]
        kites[i] = prev.moved(g)
    last = kites[p - 2]
    h = hk.half_turn(hk.midpoint(last.corners[0], last.corners[3]))
    c, a, o, b = last.moved(h).corners
    s = last.sizes
    # image order (h c, h a, h o, h b) = (b', a', o', c'); restart at the center
    kites[p - 1] = Kite((b, c, a, o), (s[3], s[0], s[1], s[2]))
    place[p - 1] = h @ place[p - 2]
    first = kites[1]
    h = hk.half_turn(hk.midpoint(first.corners[0], first.corners[1]))
    c, a, o, b = first.moved(h).corners
    s = first.sizes
    kites[p] = Kite((a, o, b, c), (s[1], s[2], s[3], s[0]))
    place[p] = h @ place[1]

    ring: list[HPoint] = []
    ring_labels: list[str] = []
    for i in range(1, p + 1):
        k = kites[i]
        ring += [k.corners[1], k.corners[2]]
        ring_labels += [_label(p, 2 * (i - 1)), _label(p, 2 * (i - 1) + 1)]
    # rotate so that v1 comes first
    start = ring_labels.index("v1")
    ring = ring[start:] + ring[:start]
    ring_labels = ring_labels[start:] + ring_labels[:start]
    by_label = dict(zip(ring_labels, ring))

    order = [f"v{i}" for i in range(1, p + 1)] + [f"v{p}'"]
    order += [f"v{i}" for i in range(p + 1, p + 4)] + [f"v{p + 3}'"]
    order += [f"v{i}" for i in range(p + 4, 2 * p + 1)]
    by_label[f"v{p}'"] = hk.midpoint(by_label[f"v{p}"], by_label[f"v{p + 1}"])
    by_label[f"v{p + 3}'"] = hk.midpoint(by_label[f"v{p + 3}"], by_label[f"v{p + 4}"])
    verts = tuple(by_label[lab] for lab in order)
    idx = {lab: i for i, lab in enumerate(order)}

    pairings: list[SidePairing] = []

    def pair(src_a: str, src_b: str, dst_a: str, dst_b: str) -> None:
        # side starting at src_a maps onto the side ending at/starting at dst
        a, b = idx[src_a], idx[src_b]
        a2, b2 = idx[dst_a], idx[dst_b]
        g = hk.segment_map(verts[a], verts[b], verts[a2], verts[b2])
        src_side = a if (a + 1) % len(verts) == b else b
        dst_side = a2 if (a2 + 1) % len(verts) == b2 else b2
        pairings.append(SidePairing(src_side, dst_side, g, ((a, a2), (b, b2))))

    pair("v1", "v2", f"v{p + 3}", f"v{p + 2}")
    pair("v2", "v3", f"v{p + 2}", f"v{p + 1}")
    pair(f"v{p}", f"v{p}'", f"v{p + 1}", f"v{p}'")
    pair(f"v{p + 3}", f"v{p + 3}'", f"v{p + 4}", f"v{p + 3}'")
    for i in list(range(4, p, 2)) + list(range(p + 5, 2 * p + 1, 2)):
        nxt = f"v{i % (2 * p) + 1}"
        pair(f"v{i}", nxt, f"v{i}", f"v{i - 1}")

    note = ("v1..v3 are the outer corners of the seed kite (v2 its triangle incenter); "
            "labels increase counterclockwise; v{p+2} is the triangle incenter shared by "
            "the two half-turned kites").replace("{p+2}", str(p + 2))
    return FundamentalPolygon(
        p=p,
        vertices=verts,
        labels=tuple(order),
        pairings=tuple(pairings),
        kites=tuple(kites[i] for i in range(1, p + 1)),
        placements=tuple(place[i] for i in range(1, p + 1)),
        center=dk.center,
        labeling_note=note,
    )


# --- cycle verification -------------------------------------------------------


@dataclass
class Cycle:
    members: list[str]
    measured_sum: float
    nearest_m: int
    residual: float
    expected_members: list[str] | None = None
    expected_sum: float | None = None
    expected_sum_text: str | None = None

    @property
    def proper(self) -> bool:
        return abs(self.residual) < 1e-8

    @property
    def verdict(self) -> str:
        if self.expected_members is None or self.expected_sum is None:
            return "MISMATCH"
        same = sorted(self.members) == sorted(self.expected_members)
        ok = same and abs(self.measured_sum - self.expected_sum) < 1e-8
        return "MATCH" if ok else "MISMATCH"


@dataclass
class CycleReport:
    p: int
    boundary_vertex_count: int
    pairings: list[dict]
    cycles: list[Cycle] = field(default_factory=list)
    labeling_note: str = ""

    @property
    def all_proper(self) -> bool:
        return all(c.proper for c in self.cycles)

    @property
    def all_match(self) -> bool:
        return all(c.verdict == "MATCH" for c in self.cycles)

    def partition_ok(self, labels) -> bool:
        seen = [m for c in self.cycles for m in c.members]
        return sorted(seen) == sorted(labels) and len(seen) == len(set(seen))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "boundary_vertex_count": self.boundary_vertex_count,
            "labeling": self.labeling_note,
            "pairings": self.pairings,
            "cycles": [
                {
                    "members": c.members,
                    "measured_sum": c.measured_sum,
                    "nearest_m": c.nearest_m,
                    "residual": c.residual,
                    "proper": c.proper,
                    "expected": {
                        "members": c.expected_members,
                        "sum": c.expected_sum,
                        "sum_text": c.expected_sum_text,
                    },
                    "verdict": c.verdict,
                }
                for c in self.cycles
            ],
            "all_proper": self.all_proper,
            "all_match": self.all_match,
        }


def expected_cycles(p: int) -> list[tuple[list[str], float, str]]:
    """Reference cycles and angle sums that measured cycles are compared against."""
    out = [
        (["v2", f"v{p + 2}"], TWO_PI, "2pi"),
        (["v3"] + [f"v{i}" for i in range(5, p + 1, 2)] + [f"v{p + 1}"], TWO_PI, "2pi"),
        ([f"v{p + 3}", f"v{p + 4}"] + [f"v{i}" for i in range(p + 6, 2 * p, 2)] + ["v1"],
         TWO_PI, "2pi"),
        ([f"v{p}'"], math.pi, "pi"),
        ([f"v{p + 3}'"], math.pi, "pi"),
    ]
    for i in list(range(4, p, 2)) + list(range(p + 5, 2 * p + 1, 2)):
        out.append(([f"v{i}"], TWO_PI / p, f"2pi/{p}"))
    return out


def trace_cycles(f: FundamentalPolygon) -> CycleReport:
    """Walk the vertex cycles generated by the side pairings and measure them."""
    n = f.n
    # side -> (partner side, vertex correspondence dict)
    link: dict[int, tuple[int, dict[int, int]]] = {}
    for pr in f.pairings:
        fwd = dict(pr.vertex_map)
        link[pr.source] = (pr.target, fwd)
        link[pr.target] = (pr.source, {b: a for a, b in fwd.items()})
    if len(link) != n:
        missing = sorted(set(range(n)) - set(link))
        raise ValueError(f"unpaired sides: {missing}")

    def sides_at(v: int) -> tuple[int, int]:
        return (v - 1) % n, v

    cycles: list[Cycle] = []
    done: set[int] = set()
    for start in range(n):
        if start in done:
            continue
        visits = _visits(f, start, link, sides_at, limit=10 * n)
        members = list(dict.fromkeys(visits))
        total = sum(f.angle(u) for u in visits)
        done.update(members)
        m = max(1, round(TWO_PI / total))
        cycles.append(Cycle([f.labels[u] for u in members], total, m, total - TWO_PI / m))

    expected = expected_cycles(f.p) if f.labels and f.labels[0] == "v1" else []
    for c in cycles:
        for mem, ssum, text in expected:
            if set(mem) & set(c.members):
                c.expected_members, c.expected_sum, c.expected_sum_text = mem, ssum, text
                break
    pairings = [
        {
            "source": f.side_name(pr.source),
            "target": f.side_name(pr.target),
            "matrix": [[float(x) for x in row] for row in pr.isometry.matrix],
        }
        for pr in f.pairings
    ]
    return CycleReport(f.p, n, pairings, cycles, f.labeling_note)


def _visits(f, start, link, sides_at, limit) -> list[int]:
    """Corners met by the cycle walk from ``start``, one entry per visit."""
    out = []
    v, s = start, sides_at(start)[1]
    while True:
        out.append(v)
        partner, vm = link[s]
        v = vm[v]
        a, b = sides_at(v)
        s = b if partner == a else a
        if v == start and s == sides_at(start)[1]:
            return out
        if len(out) > limit:
            raise NonClosingCycle(f"cycle from {f.labels[start]} did not close in {limit} steps")


# --- vertex-transitivity obstruction ---------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    p: int
    verdict: str
    edge_contacts: int | None
    vertex_contacts: int | None
    note: str

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"

    def to_dict(self) -> dict:
        return {"p": self.p, "verdict": self.verdict, "i": self.edge_contacts,
                "j": self.vertex_contacts, "note": self.note}


def vt_obstruction_p33(p: int) -> Obstruction:
    """Double-counting test for vertex-transitive maps of type [p,p,p,3].

    In a vertex-transitive map every p-gon meets triangles along ``i`` edges
    and at ``j`` lone vertices with ``2i + j = p``.  Each triangle adds 3 to
    both the edge count and the lone-vertex count, so density forces
    ``i = j``, hence ``3 | p``.  For odd p the p-gons cannot avoid lone
    vertices, which is what makes the argument apply.
    """
    if p < 4:
        raise ValueError(f"p must be at least 4, got {p}")
    if p % 3 == 0:
        return Obstruction(p, "not_obstructed", p // 3, p // 3,
                           "balanced contacts i = j = p/3 are possible")
    if p % 2 == 1:
        residue = "p = 1 (mod 6)" if p % 6 == 1 else "p = 5 (mod 6)"
        return Obstruction(p, "obstructed", None, None,
                           f"2i + j = p with i = j needs 3 | p; {residue}")
    return Obstruction(p, "not_obstructed", None, None,
                       "p even: p-gons may avoid lone triangle vertices, argument does not apply")
