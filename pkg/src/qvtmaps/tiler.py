"""Finite patches of the kite tiling generated by the side pairings of F(p).

Copies of F(p) are placed by breadth-first search over words in the
pairing isometries and their inverses.  Each copy carries the p kites, so
the patch is a kite complex; its dual (one vertex per kite, one face per
kite corner) is a patch of the [p,p,p,3] map.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from . import hypkernel as hk
from .hypkernel import HPoint, Isometry
from .poincare import FundamentalPolygon, Kite
from .vertex_type import VertexType, canonical_cycle

GRID = 1e-6
MAX_DEPTH = 8
ANGLE_TOL = 1e-6


class TilingError(RuntimeError):
    pass


class DedupCollision(TilingError):
    """Two kites of different slots landed on the same spot."""


class EmptyInterior(TilingError):
    pass


class _PointTable:
    """Points keyed on a square grid; lookups probe the neighbouring cells."""

    def __init__(self, grid: float = GRID):
        self.grid = grid
        self.cells: dict[tuple[int, int], list[int]] = {}
        self.points: list[HPoint] = []

    def _cell(self, p: HPoint) -> tuple[int, int]:
        return round(p.x / self.grid), round(p.y / self.grid)

    def find(self, p: HPoint) -> int | None:
        cx, cy = self._cell(p)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for i in self.cells.get((cx + dx, cy + dy), ()):
                    q = self.points[i]
                    if abs(q.x - p.x) <= self.grid and abs(q.y - p.y) <= self.grid:
                        return i
        return None

    def add(self, p: HPoint) -> int:
        i = len(self.points)
        self.points.append(p)
        self.cells.setdefault(self._cell(p), []).append(i)
        return i

    def find_or_add(self, p: HPoint) -> tuple[int, bool]:
        i = self.find(p)
        if i is not None:
            return i, False
        return self.add(p), True

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PlacedKite:
    kite: Kite
    slot: int
    copy: int
    word: tuple[str, ...]
    corners: tuple[int, int, int, int]  # indices into TilingPatch.points

    @property
    def center(self) -> HPoint:
        return self.kite.centroid()


@dataclass
class TilingPatch:
    p: int
    kites: list[PlacedKite] = field(default_factory=list)
    points: list[HPoint] = field(default_factory=list)
    copies: list[tuple[Isometry, tuple[str, ...]]] = field(default_factory=list)
    depth: int = 0

    def sides(self) -> dict[tuple[int, int], list[int]]:
        """Each kite side (as a sorted corner-point pair) with the kites on it."""
        out: dict[tuple[int, int], list[int]] = {}
        for ki, k in enumerate(self.kites):
            c = k.corners
            for i in range(4):
                a, b = c[i], c[(i + 1) % 4]
                out.setdefault((min(a, b), max(a, b)), []).append(ki)
        return out

    def neighbors(self) -> list[set[int]]:
        nb = [set() for _ in self.kites]
        for ks in self.sides().values():
            for a, b in combinations(ks, 2):
                nb[a].add(b)
                nb[b].add(a)
        return nb

    def kites_at(self) -> list[list[int]]:
        at = [[] for _ in self.points]
        for ki, k in enumerate(self.kites):
            for c in k.corners:
                at[c].append(ki)
        return at

    def angle_sums(self) -> list[float]:
        sums = [0.0] * len(self.points)
        for k in self.kites:
            for c, a in zip(k.corners, k.kite.angles()):
                sums[c] += a
        return sums

    def complete_points(self) -> list[bool]:
        return [abs(s - 2 * math.pi) < ANGLE_TOL for s in self.angle_sums()]

    def interior(self) -> list[int]:
        """Kites whose four corners are fully surrounded by kites of the patch."""
        done = self.complete_points()
        return [ki for ki, k in enumerate(self.kites) if all(done[c] for c in k.corners)]


def _generators(f: FundamentalPolygon) -> list[tuple[str, Isometry]]:
    gens = []
    for i, pr in enumerate(f.pairings):
        gens.append((f"g{i}", pr.isometry))
        gens.append((f"g{i}^-1", pr.isometry.inverse()))
    return gens


def expand(f: FundamentalPolygon, depth: int) -> TilingPatch:
    """Copies of F(p) reachable by words of length at most ``depth``.

    Copies are deduplicated by the image of the central incenter and kites
    by their centroids, both on a 1e-6 grid.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > MAX_DEPTH:
        raise ValueError(f"depth {depth} exceeds the drift budget of {MAX_DEPTH}")
    gens = _generators(f)
    ref = f.center if f.center is not None else f.kites[0].corners[0]
    patch = TilingPatch(f.p, depth=depth)
    copy_table = _PointTable()
    kite_table = _PointTable()
    kite_slot: list[int] = []
    point_table = _PointTable()

    def place(g: Isometry, word: tuple[str, ...]) -> None:
        ci = len(patch.copies)
        patch.copies.append((g, word))
        for slot, k in enumerate(f.kites, start=1):
            moved = k.moved(g)
            ki, new = kite_table.find_or_add(moved.centroid())
            if not new:
                if kite_slot[ki] != slot:
                    raise DedupCollision(
                        f"kite of slot {slot} from word {'.'.join(word) or 'e'} lands on a "
                        f"kite of slot {kite_slot[ki]}")
                continue
            kite_slot.append(slot)
            corners = tuple(point_table.find_or_add(c)[0] for c in moved.corners)
            patch.kites.append(PlacedKite(moved, slot, ci, word, corners))

    copy_table.add(ref)
    place(Isometry.identity(), ())
    frontier = deque([(Isometry.identity(), ())])
    for _ in range(depth):
        nxt = deque()
        for g, word in frontier:
            for name, h in gens:
                gh = g @ h
                _, new = copy_table.find_or_add(gh.apply(ref))
                if not new:
                    continue
                w = word + (name,)
                place(gh, w)
                nxt.append((gh, w))
        frontier = nxt
    patch.points = list(point_table.points)
    return patch


def slot_classes(t: TilingPatch) -> int:
    return len({k.slot for k in t.kites})


# --- primal map of the patch -----------------------------------------------------


@dataclass
class PatchMap:
    """A finite piece of a map: faces as vertex cycles plus the vertices to check.

    Only vertices listed in ``interior`` are guaranteed to have all their
    faces present and complete.
    """

    faces: list[tuple[int, ...]]
    interior: list[int]
    vertex_count: int = 0

    def __post_init__(self):
        if not self.vertex_count:
            self.vertex_count = 1 + max((v for f in self.faces for v in f), default=-1)
        self._at: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for fi, face in enumerate(self.faces):
            for v in face:
                self._at[v].append(fi)

    def faces_at(self, v: int) -> list[int]:
        return self._at[v]

    def rotation(self, v: int) -> list[int] | None:
        """Faces around ``v`` in cyclic order, or None if they do not close up."""
        corners = []
        for fi in self._at[v]:
            face = self.faces[fi]
            k = len(face)
            for i, x in enumerate(face):
                if x == v:
                    corners.append((fi, face[i - 1], face[(i + 1) % k]))
        if not corners:
            return None
        order = [corners[0]]
        used = {0}
        while len(order) < len(corners):
            fi, a, b = order[-1]
            step = None
            for j, (fj, c, d) in enumerate(corners):
                if j in used:
                    continue
                if c == b:
                    step = (j, (fj, c, d))
                elif d == b:
                    step = (j, (fj, d, c))
                if step:
                    break
            if step is None:
                return None
            used.add(step[0])
            order.append(step[1])
        if order[-1][2] != order[0][1]:
            return None
        return [fi for fi, _, _ in order]

    def vertex_type(self, v: int) -> VertexType | None:
        rot = self.rotation(v)
        if rot is None or len(rot) < 3:
            return None
        return VertexType(tuple(len(self.faces[fi]) for fi in rot))


def extract_primal(t: TilingPatch) -> PatchMap:
    """Dual of the kite complex: kites become vertices, complete corners become faces."""
    interior = t.interior()
    if not interior:
        raise EmptyInterior(f"patch of depth {t.depth} has no kite with a complete neighbourhood")
    done = t.complete_points()
    at = t.kites_at()
    faces = []
    for pi, ks in enumerate(at):
        if not done[pi]:
            continue
        c = t.points[pi]
        ordered = sorted(ks, key=lambda ki: hk.tangent_direction(c, t.kites[ki].center))
        faces.append(tuple(ordered))
    return PatchMap(faces, interior, len(t.kites))


@dataclass(frozen=True)
class PolyhedralVerdict:
    vertex: int
    ok: bool
    faces: tuple[int, int] | None = None


def _face_edges(face: tuple[int, ...]) -> set[frozenset]:
    k = len(face)
    return {frozenset((face[i], face[(i + 1) % k])) for i in range(k)}


def check_polyhedral_patch(m: PatchMap) -> list[PolyhedralVerdict]:
    """For each interior vertex, whether any two faces at it meet in it or in one edge."""
    if not m.interior:
        raise EmptyInterior("no interior vertices to check")
    out = []
    for v in m.interior:
        fs = m.faces_at(v)
        bad = None
        for f1, f2 in combinations(fs, 2):
            common = set(m.faces[f1]) & set(m.faces[f2])
            if common == {v}:
                continue
            if len(common) == 2 and frozenset(common) in (_face_edges(m.faces[f1])
                                                          & _face_edges(m.faces[f2])):
                continue
            bad = (f1, f2)
            break
        if bad is None and any(m.faces[f].count(v) > 1 for f in fs):
            f = next(f for f in fs if m.faces[f].count(v) > 1)
            bad = (f, f)
        out.append(PolyhedralVerdict(v, bad is None, bad))
    return out


@dataclass(frozen=True)
class PatchSummary:
    p: int
    depth: int
    kites: int
    copies: int
    interior: int
    slot_classes: int
    homogeneous: bool
    polyhedral: bool
    interior_types: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "p": self.p, "depth": self.depth, "kites": self.kites, "copies": self.copies,
            "interior": self.interior, "slot_classes": self.slot_classes,
            "homogeneous": self.homogeneous, "polyhedral": self.polyhedral,
            "interior_types": dict(sorted(self.interior_types.items())),
        }


def summarize_patch(t: TilingPatch) -> PatchSummary:
    """Type and polyhedrality checks over the interior; empty interiors pass vacuously."""
    target = VertexType.p33(t.p)
    types: dict[str, int] = {}
    homogeneous = polyhedral = True
    n_int = len(t.interior())
    if n_int:
        m = extract_primal(t)
        for v in m.interior:
            vt = m.vertex_type(v)
            key = str(vt) if vt is not None else "open"
            types[key] = types.get(key, 0) + 1
            homogeneous &= vt == target
        polyhedral = all(r.ok for r in check_polyhedral_patch(m))
    return PatchSummary(t.p, t.depth, len(t.kites), len(t.copies), n_int, slot_classes(t),
                        homogeneous, polyhedral, types)


# --- rendering ---------------------------------------------------------------------

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
)


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _screen(p: HPoint) -> tuple[float, float]:
    u, v = p.to_disk()
    return u, -v  # SVG y axis points down


def _arc(a: tuple[float, float], b: tuple[float, float]) -> str:
    """SVG path command drawing the geodesic from ``a`` to ``b`` (pen already at ``a``)."""
    cross = a[0] * b[1] - a[1] * b[0]
    if abs(cross) < 1e-12:
        return f"L {_fmt(b[0])} {_fmt(b[1])}"
    # centre of the circle orthogonal to the unit circle through a and b
    ra, rb = a[0] ** 2 + a[1] ** 2 + 1, b[0] ** 2 + b[1] ** 2 + 1
    det = 2 * cross
    cx = (ra * b[1] - rb * a[1]) / det
    cy = (rb * a[0] - ra * b[0]) / det
    r = math.sqrt(max(cx * cx + cy * cy - 1, 0.0))
    turn = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
    sweep = 1 if turn > 0 else 0
    return f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(b[0])} {_fmt(b[1])}"


def _path(pts: list[tuple[float, float]], closed: bool) -> str:
    out = [f"M {_fmt(pts[0][0])} {_fmt(pts[0][1])}"]
    n = len(pts)
    for i in range(1, n + (1 if closed else 0)):
        out.append(_arc(pts[i - 1], pts[i % n]))
    if closed:
        out.append("Z")
    return " ".join(out)


def render_svg_text(t: TilingPatch, size: int = 800) -> str:
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="-1.02 -1.02 2.04 2.04">',
        '<circle class="disk" cx="0" cy="0" r="1" fill="#ffffff" stroke="#000000" '
        'stroke-width="0.004"/>',
    ]
    for k in t.kites:
        pts = [_screen(c) for c in k.kite.corners]
        color = PALETTE[(k.slot - 1) % len(PALETTE)]
        lines.append(f'<path class="kite" data-slot="{k.slot}" fill="{color}" '
                     f'd="{_path(pts, True)}"/>')
    for a, b in sorted(t.sides()):
        pts = [_screen(t.points[a]), _screen(t.points[b])]
        lines.append(f'<path class="side" fill="none" stroke="#222222" stroke-width="0.002" '
                     f'd="{_path(pts, False)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(t: TilingPatch, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(render_svg_text(t))
