"""Census of homogeneous maps of a given vertex type on closed surfaces.

Maps are grown from vertex stars.  Every vertex is a star of ``d`` darts
whose corners carry the face sizes of the vertex type, so ``s1`` and
``s2`` are fixed in advance and the search only decides ``s0``: which
dart each free dart is glued to, and with which twist.  Faces are traced
after every gluing and must close up at exactly their prescribed size.

Isomorph rejection is orderly: a completed map is kept only when the flag
it was grown from gives the least breadth-first code among all flags that
could have served as the root.
"""
from __future__ import annotations

import itertools
import json
import logging
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from . import fmio
from .surfmap import FlagMap, summarize
from .vertex_type import VertexType

log = logging.getLogger(__name__)


class CensusError(ValueError):
    pass


class NonIntegralSolution(CensusError):
    pass


class CurvatureMismatch(CensusError):
    pass


class Underdetermined(CensusError):
    pass


class InfeasibleCounts(CensusError):
    pass


class SearchExhaustedNoWitness(RuntimeError):
    pass


# --- counting --------------------------------------------------------------------


@dataclass(frozen=True)
class FaceVector:
    vertex_type: VertexType
    chi: int
    V: int
    E: int
    F: int
    counts: dict[int, int]

    @property
    def triangles(self) -> int:
        return self.counts.get(3, 0)

    def polygons(self, k: int) -> int:
        return self.counts.get(k, 0)

    def to_dict(self) -> dict:
        return {"type": list(self.vertex_type.faces), "chi": self.chi, "V": self.V,
                "E": self.E, "F": self.F,
                "counts": {str(k): c for k, c in sorted(self.counts.items())}}


def face_vector(t: VertexType, chi: int) -> FaceVector:
    """Vertex, edge and face counts forced by a vertex type and Euler characteristic.

    ``chi = V (2 - alpha) / 2``, with ``alpha`` the angle sum of the type.
    """
    alpha = t.alpha()
    slope = (2 - alpha) / 2  # chi per vertex
    if slope == 0:
        if chi == 0:
            raise Underdetermined(f"{t} is euclidean: chi = 0 does not fix the vertex count")
        raise CurvatureMismatch(f"{t} is euclidean and only lives on chi = 0 surfaces")
    if chi == 0 or (chi > 0) != (slope > 0):
        kind = "hyperbolic" if slope < 0 else "spherical"
        raise CurvatureMismatch(f"{t} is {kind}; chi = {chi} has the wrong sign")
    V = Fraction(chi) / slope
    d = t.degree
    mult = {k: t.faces.count(k) for k in set(t.faces)}
    counts = {k: V * m / k for k, m in mult.items()}
    E = V * d / 2
    bad = [x for x in [V, E, *counts.values()] if x.denominator != 1]
    if bad or V <= 0:
        raise NonIntegralSolution(f"{t} with chi = {chi} needs V = {V}, face counts "
                                  f"{ {k: str(c) for k, c in counts.items()} }")
    counts_i = {k: int(c) for k, c in counts.items()}
    return FaceVector(t, chi, int(V), int(E), sum(counts_i.values()), counts_i)


def _is_p33(t: VertexType) -> bool:
    f = sorted(t.faces)
    return len(f) == 4 and f[0] == 3 and f[1] == f[2] == f[3] != 3


def _p33_size(t: VertexType) -> int:
    if not _is_p33(t):
        raise CensusError(f"expected a type [p,p,p,3], got {t}")
    return max(t.faces)


def pentagon_type_solutions(fv: FaceVector) -> list[tuple[int, ...]]:
    """Non-negative solutions for the numbers of p-gons touching n triangles.

    A p-gon meets triangles along ``i`` edges and at ``p - 2i`` lone
    vertices, so it touches ``n = p - i`` triangles with ``ceil(p/2) <= n
    <= p``.  The counts must add to the number of p-gons, and the weighted
    sum must equal ``6 * triangles`` (each triangle touches 3 p-gons along
    edges and 3 more at its corners).  Tuples are indexed by n ascending,
    so for pentagons they read ``(p3, p4, p5)``.
    """
    p = _p33_size(fv.vertex_type)
    q, t = fv.polygons(p), fv.triangles
    ns = list(range((p + 1) // 2, p + 1))
    out = []
    for combo in _compositions(q, len(ns)):
        if sum(n * c for n, c in zip(ns, combo)) == 6 * t:
            out.append(combo)
    return sorted(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def triangles_of(m: FlagMap) -> list[set[int]]:
    return [set(w) for w, k in zip(m.face_vertices, m.face_sizes) if k == 3]


def triangle_disjointness(m: FlagMap) -> bool:
    seen: set[int] = set()
    for tri in triangles_of(m):
        if seen & tri:
            return False
        seen |= tri
    return True


def _contacts(m: FlagMap, p: int, distinct: bool) -> list[tuple[frozenset, int]]:
    """Each p-gon with the number of triangle contacts it has.

    A p-gon sharing ``i`` edges with triangles has ``p - i`` contacts: one
    per shared edge and one per remaining corner.  In a polyhedral map each
    contact is a different triangle; with ``distinct`` the distinct
    triangles touching the p-gon are counted instead.
    """
    tris = triangles_of(m)
    face_of, s2 = m.face_of, m.s2
    sizes = m.face_sizes
    shared = [0] * m.F
    for f in range(m.n):
        if sizes[face_of[s2[f]]] == 3:
            shared[face_of[f]] += 1
    out = []
    for fi, walk, k in zip(range(m.F), m.face_vertices, sizes):
        if k != p:
            continue
        ws = frozenset(walk)
        if distinct:
            n = sum(1 for t in tris if t & ws)
        else:
            n = p - shared[fi] // 2  # two flags per edge
        out.append((ws, n))
    return out


def pentagon_types(m: FlagMap, p: int = 5, distinct: bool = False) -> tuple[int, ...]:
    """Numbers of p-gons with n triangle contacts, n = ceil(p/2)..p.

    A trailing extra entry counts p-gons outside that range, if any.
    """
    ns = list(range((p + 1) // 2, p + 1))
    counts = dict.fromkeys(ns, 0)
    extra = 0
    for _, n in _contacts(m, p, distinct):
        if n in counts:
            counts[n] += 1
        else:
            extra += 1
    out = tuple(counts[n] for n in ns)
    return out + (extra,) if extra else out


def has_three_disjoint_type4(m: FlagMap, distinct: bool = False) -> bool:
    """Whether three pairwise vertex-disjoint pentagons each have 4 triangle contacts."""
    t4 = [ws for ws, n in _contacts(m, 5, distinct) if n == 4]
    return any(not (a & b or a & c or b & c) for a, b, c in itertools.combinations(t4, 3))


# --- search ----------------------------------------------------------------------


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0
    leaves: int = 0
    rejected_noncanonical: int = 0
    rejected_filter: int = 0
    wall_time: float = 0.0
    complete: bool = True

    def to_dict(self) -> dict:
        return {"nodes": self.nodes, "prunes": self.prunes, "leaves": self.leaves,
                "rejected_noncanonical": self.rejected_noncanonical,
                "rejected_filter": self.rejected_filter,
                "wall_time": round(self.wall_time, 3), "complete": self.complete}


@dataclass
class CensusResult:
    face_vector: FaceVector
    maps: list[FlagMap]
    stats: SearchStats
    mode: str
    filters: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.maps)


class _Star:
    """Positions and symmetries of one vertex star of a given type."""

    def __init__(self, t: VertexType):
        k = t.faces
        d = len(k)
        self.d = d
        # label of flag position (j, s): s=1 -> corner j, s=0 -> corner j-1
        self.label = [k[(j - 1) % d] if s == 0 else k[j] for j in range(d) for s in (0, 1)]
        syms = []
        for r in range(d):
            if all(k[(j + r) % d] == k[j] for j in range(d)):
                syms.append(tuple(2 * ((j + r) % d) + s for j in range(d) for s in (0, 1)))
            # reflection dart j -> r - j: corner j -> corner r - j - 1
            if all(k[(r - j - 1) % d] == k[j] for j in range(d)):
                syms.append(tuple(2 * ((r - j) % d) + 1 - s for j in range(d) for s in (0, 1)))
        self.symmetries = syms
        seen, reps = set(), []
        for pos in range(2 * d):
            if pos in seen:
                continue
            reps.append(pos)
            seen.update(g[pos] for g in syms)
        self.fresh_reps = reps
        self.root_positions = sorted({g[0] for g in syms})


class _Search:
    def __init__(self, fv: FaceVector, polyhedral: bool, orientable: bool | None,
                 first: bool, node_limit: int | None, time_limit: float | None,
                 order_seed: int | None = None, branching: str = "constrained"):
        self.fv = fv
        self.t = fv.vertex_type
        self.star = _Star(self.t)
        d = self.d = self.star.d
        self.V = fv.V
        self.nflags = 2 * d * fv.V
        n = self.nflags
        self.s0 = [-1] * n
        self.s1 = [0] * n
        self.s2 = [0] * n
        for v in range(fv.V):
            for j in range(d):
                a = 2 * (d * v + j)
                self.s2[a], self.s2[a + 1] = a + 1, a
                b = 2 * (d * v + (j + 1) % d)
                self.s1[a + 1], self.s1[b] = b, a + 1
        self.lab = [self.star.label[f % (2 * d)] for f in range(n)]
        self.vtx = [f // (2 * d) for f in range(n)]
        self.nv = 1
        self.adj = [set() for _ in range(fv.V)]
        self.sign = [0] * fv.V
        self.sign[0] = 1
        self.polyhedral = polyhedral
        self.orientable = orientable
        self.first = first
        self.node_limit = node_limit
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.stats = SearchStats()
        self.found: list[FlagMap] = []
        self.codes: set[tuple[int, ...]] = set()
        # closed faces for the polyhedral filter
        self.face_sets: list[tuple[frozenset, frozenset]] = []
        self.faces_at = [[] for _ in range(fv.V)]
        self.rng = None if order_seed is None else random.Random(order_seed)
        self.branching = branching
        self._stop = False

    # -- face tracing ---------------------------------------------------------

    def _trace(self, f: int):
        """Corners of the face through flag ``f`` as (closed, vertices, ends)."""
        s0, s1, vtx = self.s0, self.s1, self.vtx
        verts = []
        x = f
        while True:
            verts.append(vtx[x])
            y = s0[s1[x]]
            if y < 0:
                end_fwd = s1[x]
                break
            x = y
            if x == f:
                return True, verts, None
        # walk backwards from f
        back = []
        z = s0[f]
        if z < 0:
            return False, verts, (end_fwd, f)
        while True:
            z1 = s1[z]
            back.append(vtx[z])
            y = s0[z1]
            if y < 0:
                end_bwd = z1
                break
            z = y
        back.reverse()
        return False, back + verts, (end_fwd, end_bwd)

    def _face_ok(self, f: int) -> bool:
        closed, verts, ends = self._trace(f)
        k = self.lab[f]
        c = len(verts)
        if c > k or len(set(verts)) != c:
            return False
        if closed:
            if c != k:
                return False
            if self.polyhedral and not self._poly_ok(verts):
                return False
            return True
        if c == k:
            a, b = ends
            va, vb = self.vtx[a], self.vtx[b]
            if va == vb or vb in self.adj[va]:
                return False
        return True

    def _poly_ok(self, verts: list[int]) -> bool:
        vs = frozenset(verts)
        k = len(verts)
        es = frozenset(frozenset((verts[i], verts[(i + 1) % k])) for i in range(k))
        checked = set()
        for v in verts:
            for fi in self.faces_at[v]:
                if fi in checked:
                    continue
                checked.add(fi)
                ovs, oes = self.face_sets[fi]
                common = vs & ovs
                if len(common) == 1:
                    if es & oes:
                        return False
                    continue
                if len(common) == 2 and (es & oes) == {common}:
                    continue
                return False
        return True

    # -- gluing ---------------------------------------------------------------

    def _options(self, f: int):
        d = self.d
        v = self.vtx[f]
        s = f & 1
        la, lb = self.lab[f], self.lab[f ^ 1]
        lab = self.lab
        s0 = self.s0
        opts = []
        for w in range(self.nv):
            if w == v or w in self.adj[v]:
                continue
            base = 2 * d * w
            for g in range(base, base + 2 * d):
                if s0[g] >= 0 or lab[g] != la or lab[g ^ 1] != lb:
                    continue
                if self.orientable:
                    t = (g & 1) if s == 0 else 1 - (g & 1)
                    if (t == 1) != (self.sign[v] == self.sign[w]):
                        continue
                opts.append(g)
        if self.nv < self.V:
            base = 2 * d * self.nv
            for pos in self.star.fresh_reps:
                g = base + pos
                if lab[g] == la and lab[g ^ 1] == lb:
                    opts.append(g)
        if self.rng is not None:
            self.rng.shuffle(opts)
        return opts

    def _glue(self, f: int, g: int, trail: list) -> None:
        s0 = self.s0
        s0[f], s0[g] = g, f
        s0[f ^ 1], s0[g ^ 1] = g ^ 1, f ^ 1
        v, w = self.vtx[f], self.vtx[g]
        self.adj[v].add(w)
        self.adj[w].add(v)
        trail.append((f, g))

    def _unglue(self, f: int, g: int) -> None:
        s0 = self.s0
        s0[f] = s0[g] = s0[f ^ 1] = s0[g ^ 1] = -1
        v, w = self.vtx[f], self.vtx[g]
        self.adj[v].discard(w)
        self.adj[w].discard(v)

    def _register_closed(self, f: int, added: list) -> None:
        closed, verts, _ = self._trace(f)
        if not closed:
            return
        vs = frozenset(verts)
        for fi in self.faces_at[verts[0]]:
            if self.face_sets[fi][0] == vs:
                return
        k = len(verts)
        es = frozenset(frozenset((verts[i], verts[(i + 1) % k])) for i in range(k))
        self.face_sets.append((vs, es))
        idx = len(self.face_sets) - 1
        for v in verts:
            self.faces_at[v].append(idx)
        added.append(idx)

    def _pop_faces(self, added: list) -> None:
        for idx in reversed(added):
            vs, _ = self.face_sets.pop()
            for v in vs:
                self.faces_at[v].pop()

    # -- driver ---------------------------------------------------------------

    def _pick(self) -> int | None:
        """Open flag whose face is closest to completion; ties by index.

        With ``branching="index"`` the least open flag is taken instead.
        """
        best, best_c = None, None
        s0 = self.s0
        limit = 2 * self.d * self.nv
        for f in range(limit):
            if s0[f] >= 0:
                continue
            if self.branching == "index":
                return f
            closed, verts, _ = self._trace(f)
            c = len(verts) - self.lab[f]  # higher is more constrained
            if best_c is None or c > best_c:
                best, best_c = f, c
        return best

    def _out_of_budget(self) -> bool:
        st = self.stats
        if self.node_limit is not None and st.nodes >= self.node_limit:
            return True
        if self.deadline is not None and (st.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            return True
        return False

    def run(self) -> None:
        t0 = time.monotonic()
        try:
            self._dfs()
        finally:
            self.stats.wall_time = time.monotonic() - t0

    def _dfs(self) -> None:
        if self._stop:
            return
        st = self.stats
        st.nodes += 1
        if self._out_of_budget():
            st.complete = False
            self._stop = True
            return
        f = self._pick()
        if f is None:
            if self.nv == self.V:
                self._leaf()
            else:
                st.prunes += 1
            return
        for g in self._options(f):
            fresh = self.vtx[g] == self.nv
            w = self.vtx[g]
            if fresh:
                self.nv += 1
                v = self.vtx[f]
                t = (g & 1) if (f & 1) == 0 else 1 - (g & 1)
                self.sign[w] = self.sign[v] if t == 1 else -self.sign[v]
            trail: list = []
            self._glue(f, g, trail)
            added: list = []
            ok = self._face_ok(f) and self._face_ok(f ^ 1)
            if ok and self.polyhedral:
                self._register_closed(f, added)
                self._register_closed(f ^ 1, added)
            if ok:
                self._dfs()
            else:
                st.prunes += 1
            self._pop_faces(added)
            self._unglue(f, g)
            if fresh:
                self.nv -= 1
                self.sign[w] = 0
            if self._stop:
                return

    def _leaf(self) -> None:
        st = self.stats
        st.leaves += 1
        m = FlagMap(self.s0, self.s1, self.s2)
        if self.orientable is not None and m.is_orientable() != self.orientable:
            st.rejected_filter += 1
            return
        if self.polyhedral and not m.is_polyhedral():
            st.rejected_filter += 1
            return
        roots = [2 * self.d * v + pos for v in range(self.V) for pos in self.star.root_positions]
        mine = m.code_from(0)
        for r in roots:
            c = m.code_from(r, mine)
            if c is not None and c < mine:
                st.rejected_noncanonical += 1
                return
        if mine in self.codes:
            # cannot happen with an orderly search; guards the invariant
            raise RuntimeError("orderly search emitted a duplicate map")
        self.codes.add(mine)
        self.found.append(m)
        if self.first:
            self._stop = True


def enumerate_maps(t: VertexType, chi: int, polyhedral: bool = False,
                   orientable: bool | None = None, mode: str = "exhaustive",
                   node_limit: int | None = None, time_limit: float | None = None,
                   order_seed: int | None = None, branching: str = "constrained") -> CensusResult:
    """All maps of vertex type ``t`` on surfaces of Euler characteristic ``chi``.

    Maps are simple, connected and have every face a closed disc bounded
    by a cycle.  ``orientable`` restricts to orientable (True) or
    non-orientable (False) surfaces.  ``mode`` is ``"exhaustive"`` or
    ``"first"``.  With a node or time limit the result may be partial, which
    is recorded in ``stats.complete``.

    ``order_seed`` shuffles the gluing options at every node and
    ``branching`` picks the next open flag (``"constrained"`` or
    ``"index"``); neither changes an exhaustive result.
    """
    if mode not in ("exhaustive", "first"):
        raise ValueError(f"unknown mode {mode!r}")
    if branching not in ("constrained", "index"):
        raise ValueError(f"unknown branching rule {branching!r}")
    fv = face_vector(t, chi)
    if _is_p33(t) and not pentagon_type_solutions(fv):
        raise InfeasibleCounts(f"no p-gon contact counts fit {t} at chi = {chi}")
    if orientable and chi % 2:
        # orientable closed surfaces have even Euler characteristic
        stats = SearchStats()
        return CensusResult(fv, [], stats, mode, _filters(polyhedral, orientable))
    search = _Search(fv, polyhedral, orientable, mode == "first", node_limit, time_limit,
                     order_seed, branching)
    search.run()
    log.info("census %s chi=%d: %s", t, chi, search.stats.to_dict())
    maps = sorted((m.canonical() for m in search.found), key=lambda m: m.canonical_code())
    return CensusResult(fv, maps, search.stats, mode, _filters(polyhedral, orientable))


def _filters(polyhedral: bool, orientable: bool | None) -> dict:
    return {"polyhedral": polyhedral, "orientable": orientable, "simple": True}


def enumerate(t: VertexType, chi: int, polyhedral: bool = False,  # noqa: A001
              orientable: bool | None = None, mode: str = "exhaustive",
              **kw) -> CensusResult:
    return enumerate_maps(t, chi, polyhedral=polyhedral, orientable=orientable, mode=mode, **kw)


@dataclass(frozen=True)
class QuasiVTCertificate:
    p: int
    chi: int
    witness: FlagMap
    vertex_orbit_bound: int

    def to_dict(self) -> dict:
        s = summarize(self.witness)
        return {"p": self.p, "chi": self.chi, "V": s.V, "orientable": s.orientable,
                "polyhedral": s.polyhedral, "vertex_orbits": s.vertex_orbit_count,
                "vertex_orbit_bound": self.vertex_orbit_bound, "digest": self.witness.digest()}


def quasi_vt_certificate(p: int, time_limit: float | None = None) -> QuasiVTCertificate:
    """Exhibit a finite [p,p,p,3] map with 3p vertices, on the surface chi = 9 - 2p.

    Its lift to the plane is a homogeneous planar map with finitely many
    vertex orbits.
    """
    if p < 5 or p % 2 == 0:
        raise ValueError(f"p must be odd and at least 5, got {p}")
    chi = 9 - 2 * p
    res = enumerate_maps(VertexType.p33(p), chi, mode="first", time_limit=time_limit)
    if not res.maps:
        raise SearchExhaustedNoWitness(
            f"no [{p},{p},{p},3] map found at chi = {chi} "
            f"({'search complete' if res.stats.complete else 'budget exhausted'})")
    m = res.maps[0]
    return QuasiVTCertificate(p, chi, m, m.V)


# --- persistence -----------------------------------------------------------------


def _indexed(xs):
    # the module-level name ``enumerate`` is the census entry point
    return zip(range(len(xs)), xs)


def map_record(m: FlagMap) -> dict:
    """Summary of one census map, with triangle statistics for [p,p,p,3] types."""
    rec = summarize(m).to_dict()
    rec["digest"] = m.digest()
    types = set(m.vertex_types)
    if len(types) == 1 and _is_p33(next(iter(types))):
        p = _p33_size(next(iter(types)))
        rec["triangle_disjoint"] = triangle_disjointness(m)
        rec["pgon_contact_types"] = list(pentagon_types(m, p))
        rec["pgon_distinct_triangle_types"] = list(pentagon_types(m, p, distinct=True))
        if p == 5:
            rec["three_disjoint_type4"] = has_three_disjoint_type4(m)
    return rec


def manifest(res: CensusResult, files: list[str] | None = None) -> dict:
    fv = res.face_vector
    out = {
        "type": list(fv.vertex_type.faces),
        "chi": fv.chi,
        "mode": res.mode,
        "filters": res.filters,
        "face_vector": fv.to_dict(),
        "count": len(res.maps),
        "stats": res.stats.to_dict(),
        "maps": [],
    }
    if _is_p33(fv.vertex_type):
        out["pgon_type_solutions"] = [list(s) for s in pentagon_type_solutions(fv)]
    for i, m in _indexed(res.maps):
        rec = map_record(m)
        if files is not None:
            rec = {"file": files[i], **rec}
        out["maps"].append(rec)
    return out


def write_result(res: CensusResult, out_dir: str | os.PathLike) -> Path:
    """Write every map as ``map_NNN.fm`` plus ``manifest.json``; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, m in _indexed(res.maps):
        name = f"map_{i:03d}.fm"
        fmio.write(out / name, m, comments=[
            f"type {res.face_vector.vertex_type} chi {res.face_vector.chi}",
            f"digest {m.digest()}",
        ])
        files.append(name)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest(res, files), indent=2) + "\n")
    return path
