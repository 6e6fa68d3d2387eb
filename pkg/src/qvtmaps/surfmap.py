"""Finite maps on closed surfaces encoded as flag maps.

A flag map on ``n`` flags is three fixed-point-free involutions ``s0, s1,
s2``.  ``s0`` changes the vertex of a flag, ``s1`` its edge and ``s2`` its
face.  Vertices, edges and faces are the orbits of ``<s1,s2>``,
``<s0,s2>`` and ``<s0,s1>`` respectively.  Orientable and non-orientable
surfaces go through the same code.
"""
from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .vertex_type import VertexType


class FlagMapError(ValueError):
    pass


class NotInvolution(FlagMapError):
    pass


class FixedPoint(FlagMapError):
    pass


class EdgeDegeneracy(FlagMapError):
    pass


class Disconnected(FlagMapError):
    pass


def _orbits(n: int, gens: Sequence[Sequence[int]]) -> list[int]:
    """Orbit index of every point under the group generated by ``gens``."""
    label = [-1] * n
    count = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = count
        stack = [start]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if label[y] < 0:
                    label[y] = count
                    stack.append(y)
        count += 1
    return label


class FlagMap:
    """A map on a closed surface given by its three flag involutions.

    Instances are treated as immutable; derived structure is cached.
    """

    __slots__ = ("s0", "s1", "s2", "__dict__")

    def __init__(self, s0: Sequence[int], s1: Sequence[int], s2: Sequence[int]):
        self.s0 = tuple(int(x) for x in s0)
        self.s1 = tuple(int(x) for x in s1)
        self.s2 = tuple(int(x) for x in s2)
        if not len(self.s0) == len(self.s1) == len(self.s2):
            raise FlagMapError("s0, s1, s2 must act on the same number of flags")

    @property
    def n(self) -> int:
        return len(self.s0)

    def __eq__(self, other) -> bool:
        return isinstance(other, FlagMap) and (self.s0, self.s1, self.s2) == (other.s0, other.s1, other.s2)

    def __hash__(self) -> int:
        return hash((self.s0, self.s1, self.s2))

    def __repr__(self) -> str:
        return f"FlagMap(n={self.n})"

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]]) -> FlagMap:
        """Build a map from face boundary cycles given as vertex lists.

        Faces may be listed with arbitrary orientations.  Each edge (an
        unordered vertex pair) must lie on exactly two face sides, so the
        underlying graph has to be simple.
        """
        flags: list[tuple[int, int, int]] = []  # (face, side position, end)
        index = {}
        for fi, face in enumerate(faces):
            for i in range(len(face)):
                for end in (0, 1):
                    index[(fi, i, end)] = len(flags)
                    flags.append((fi, i, end))
        n = len(flags)
        s0, s1, s2 = [0] * n, [0] * n, [0] * n
        sides: dict[frozenset, list[tuple[int, int]]] = {}
        for fi, face in enumerate(faces):
            k = len(face)
            for i in range(k):
                s0[index[(fi, i, 0)]] = index[(fi, i, 1)]
                s0[index[(fi, i, 1)]] = index[(fi, i, 0)]
                a, b = index[(fi, i, 1)], index[(fi, (i + 1) % k, 0)]
                s1[a], s1[b] = b, a
                sides.setdefault(frozenset((face[i], face[(i + 1) % k])), []).append((fi, i))
        for key, occ in sides.items():
            if len(occ) != 2:
                raise FlagMapError(f"edge {sorted(key)} lies on {len(occ)} face sides, expected 2")
            (f1, i1), (f2, i2) = occ
            for end1 in (0, 1):
                v = faces[f1][(i1 + end1) % len(faces[f1])]
                end2 = 0 if faces[f2][i2] == v else 1
                x, y = index[(f1, i1, end1)], index[(f2, i2, end2)]
                s2[x], s2[y] = y, x
        return cls(s0, s1, s2)

    @classmethod
    def from_darts(cls, sigma: Sequence[int], alpha: Sequence[int],
                   twist: Sequence[int] | None = None) -> FlagMap:
        """Build a map from darts: vertex rotation ``sigma``, edge involution ``alpha``.

        Dart ``d`` carries flags ``2d`` (the corner before ``d`` in the
        rotation) and ``2d+1`` (the corner after it).  ``twist[d] = 1``
        glues the two ends of an edge orientation-consistently; ``0``
        glues them with a flip.  Without ``twist`` the map is oriented.
        """
        m = len(sigma)
        if twist is None:
            twist = [1] * m
        n = 2 * m
        s0, s1, s2 = [0] * n, [0] * n, [0] * n
        for d in range(m):
            s2[2 * d], s2[2 * d + 1] = 2 * d + 1, 2 * d
            e = sigma[d]
            s1[2 * d + 1], s1[2 * e] = 2 * e, 2 * d + 1
            a, t = alpha[d], twist[d]
            s0[2 * d] = 2 * a + t
            s0[2 * d + 1] = 2 * a + 1 - t
        return cls(s0, s1, s2)

    # -- validation -----------------------------------------------------------

    def validate(self) -> FlagMap:
        n = self.n
        if n == 0:
            raise FlagMapError("empty flag map")
        for name, s in (("s0", self.s0), ("s1", self.s1), ("s2", self.s2)):
            for x in range(n):
                y = s[x]
                if not 0 <= y < n:
                    raise NotInvolution(f"{name}[{x}] = {y} out of range")
                if y == x:
                    raise FixedPoint(f"{name} fixes flag {x}")
                if s[y] != x:
                    raise NotInvolution(f"{name} is not an involution at flag {x}")
        for x in range(n):
            y = self.s0[self.s2[x]]
            if y == x:
                raise EdgeDegeneracy(f"s0*s2 fixes flag {x}")
            if self.s0[self.s2[y]] != x:
                raise EdgeDegeneracy(f"s0*s2 is not an involution at flag {x}")
        if max(_orbits(n, (self.s0, self.s1, self.s2))) != 0:
            raise Disconnected("flags fall into more than one connected component")
        return self

    # -- cells ----------------------------------------------------------------

    @cached_property
    def vertex_of(self) -> list[int]:
        return _orbits(self.n, (self.s1, self.s2))

    @cached_property
    def edge_of(self) -> list[int]:
        return _orbits(self.n, (self.s0, self.s2))

    @cached_property
    def face_of(self) -> list[int]:
        return _orbits(self.n, (self.s0, self.s1))

    @property
    def V(self) -> int:
        return max(self.vertex_of) + 1

    @property
    def E(self) -> int:
        return max(self.edge_of) + 1

    @property
    def F(self) -> int:
        return max(self.face_of) + 1

    @property
    def chi(self) -> int:
        return self.V - self.E + self.F

    @cached_property
    def face_sizes(self) -> list[int]:
        c = Counter(self.face_of)
        return [c[f] // 2 for f in range(self.F)]

    @cached_property
    def vertex_degrees(self) -> list[int]:
        c = Counter(self.vertex_of)
        return [c[v] // 2 for v in range(self.V)]

    def _rep(self, labels: list[int]) -> list[int]:
        rep = [-1] * (max(labels) + 1)
        for f, c in enumerate(labels):
            if rep[c] < 0:
                rep[c] = f
        return rep

    @cached_property
    def vertex_corners(self) -> list[list[int]]:
        """For each vertex, one flag per corner in cyclic order around it."""
        out = []
        for f0 in self._rep(self.vertex_of):
            corners = []
            f = f0
            while True:
                corners.append(f)
                f = self.s2[self.s1[f]]
                if f == f0:
                    break
            out.append(corners)
        return out

    @cached_property
    def face_vertices(self) -> list[list[int]]:
        """For each face, its boundary walk as a list of vertices."""
        out = []
        for f0 in self._rep(self.face_of):
            walk = []
            f = f0
            while True:
                walk.append(self.vertex_of[f])
                f = self.s1[self.s0[f]]
                if f == f0:
                    break
            out.append(walk)
        return out

    @cached_property
    def edge_ends(self) -> list[tuple[int, int]]:
        out = []
        for f in self._rep(self.edge_of):
            a, b = self.vertex_of[f], self.vertex_of[self.s0[f]]
            out.append((min(a, b), max(a, b)))
        return out

    def vertex_type_at(self, v: int) -> VertexType:
        return VertexType(tuple(self.face_sizes[self.face_of[f]] for f in self.vertex_corners[v]))

    @cached_property
    def vertex_types(self) -> list[VertexType]:
        return [self.vertex_type_at(v) for v in range(self.V)]

    def is_homogeneous(self) -> bool:
        return len(set(self.vertex_types)) == 1

    # -- surface --------------------------------------------------------------

    def is_orientable(self) -> bool:
        """Two-colour the flag graph; orientable iff it is bipartite."""
        colour = [-1] * self.n
        colour[0] = 0
        stack = [0]
        while stack:
            x = stack.pop()
            for s in (self.s0, self.s1, self.s2):
                y = s[x]
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return False
        return True

    def is_simple(self) -> bool:
        ends = self.edge_ends
        if any(a == b for a, b in ends):
            return False
        return len(set(ends)) == len(ends)

    def polyhedral_violation(self) -> tuple[int, int, int] | None:
        """First ``(vertex, face, face)`` witnessing non-polyhedrality, or None.

        Two faces at a vertex must meet in exactly that vertex or in exactly
        one edge through it.  A face passing twice through a vertex is
        reported with both face slots equal.
        """
        fv = [set(w) for w in self.face_vertices]
        fe = []
        for walk in self.face_vertices:
            k = len(walk)
            fe.append({frozenset((walk[i], walk[(i + 1) % k])) for i in range(k)})
        for v in range(self.V):
            faces = [self.face_of[f] for f in self.vertex_corners[v]]
            if len(set(faces)) != len(faces):
                dup = next(f for f in faces if faces.count(f) > 1)
                return v, dup, dup
            for i in range(len(faces)):
                for j in range(i + 1, len(faces)):
                    a, b = faces[i], faces[j]
                    common = fv[a] & fv[b]
                    shared = fe[a] & fe[b]
                    if common == {v} and not shared:
                        continue
                    if len(common) == 2 and shared == {frozenset(common)}:
                        continue
                    return v, a, b
        return None

    def is_polyhedral(self) -> bool:
        return self.polyhedral_violation() is None

    def dual(self) -> FlagMap:
        return FlagMap(self.s2, self.s1, self.s0)

    # -- symmetry -------------------------------------------------------------

    def _extend(self, src: int, dst: int) -> list[int] | None:
        """The automorphism sending flag ``src`` to ``dst``, if there is one."""
        n = self.n
        img = [-1] * n
        img[src] = dst
        stack = [src]
        gens = (self.s0, self.s1, self.s2)
        while stack:
            x = stack.pop()
            y = img[x]
            for s in gens:
                a, b = s[x], s[y]
                if img[a] < 0:
                    img[a] = b
                    stack.append(a)
                elif img[a] != b:
                    return None
        return img

    def automorphisms(self) -> list[tuple[int, ...]]:
        """All automorphisms as flag permutations (identity first)."""
        out = []
        for t in range(self.n):
            img = self._extend(0, t)
            if img is not None:
                out.append(tuple(img))
        return out

    def vertex_orbits(self, autos: list[tuple[int, ...]] | None = None) -> list[list[int]]:
        if autos is None:
            autos = self.automorphisms()
        vo = self.vertex_of
        rep = self._rep(vo)
        parent = list(range(self.V))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in autos:
            for v, f in enumerate(rep):
                a, b = find(v), find(vo[g[f]])
                if a != b:
                    parent[a] = b
        groups: dict[int, list[int]] = {}
        for v in range(self.V):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    # -- canonical form -------------------------------------------------------

    def code_from(self, root: int, bound: tuple[int, ...] | None = None) -> tuple[int, ...] | None:
        """Breadth-first relabelling code starting at flag ``root``.

        With ``bound``, stop early and return None as soon as the code is
        known to exceed it.
        """
        n = self.n
        new = [-1] * n
        order = [root]
        new[root] = 0
        code = []
        gens = (self.s0, self.s1, self.s2)
        pos = 0
        less = False
        while pos < len(order):
            x = order[pos]
            pos += 1
            for s in gens:
                y = s[x]
                if new[y] < 0:
                    new[y] = len(order)
                    order.append(y)
                c = new[y]
                if bound is not None and not less:
                    b = bound[len(code)]
                    if c > b:
                        return None
                    if c < b:
                        less = True
                code.append(c)
        return tuple(code)

    def canonical_code(self, roots: Sequence[int] | None = None) -> tuple[int, ...]:
        best = None
        for r in (range(self.n) if roots is None else roots):
            c = self.code_from(r, best)
            if c is not None and (best is None or c < best):
                best = c
        return best

    def canonical(self) -> FlagMap:
        """Isomorphic copy in canonical labelling."""
        code = self.canonical_code()
        n = self.n
        s0, s1, s2 = [0] * n, [0] * n, [0] * n
        for x in range(n):
            s0[x], s1[x], s2[x] = code[3 * x], code[3 * x + 1], code[3 * x + 2]
        return FlagMap(s0, s1, s2)

    def digest(self) -> str:
        code = self.canonical_code()
        return hashlib.sha256(",".join(map(str, code)).encode()).hexdigest()[:16]

    def is_isomorphic(self, other: FlagMap) -> bool:
        return self.n == other.n and self.canonical_code() == other.canonical_code()


@dataclass(frozen=True)
class MapSummary:
    V: int
    E: int
    F: int
    chi: int
    orientable: bool
    face_sizes: dict[int, int]
    vertex_types: dict[str, int]
    simple: bool
    polyhedral: bool | None
    vertex_orbit_count: int
    automorphism_count: int

    @property
    def homogeneous(self) -> bool:
        return len(self.vertex_types) == 1

    def to_dict(self) -> dict:
        return {
            "V": self.V, "E": self.E, "F": self.F, "chi": self.chi,
            "orientable": self.orientable,
            "face_sizes": {str(k): v for k, v in sorted(self.face_sizes.items())},
            "vertex_types": dict(sorted(self.vertex_types.items())),
            "homogeneous": self.homogeneous,
            "simple": self.simple,
            "polyhedral": self.polyhedral,
            "vertex_orbits": self.vertex_orbit_count,
            "automorphisms": self.automorphism_count,
        }


def summarize(m: FlagMap) -> MapSummary:
    autos = m.automorphisms()
    simple = m.is_simple()
    return MapSummary(
        V=m.V, E=m.E, F=m.F, chi=m.chi,
        orientable=m.is_orientable(),
        face_sizes=dict(Counter(m.face_sizes)),
        vertex_types=dict(Counter(str(t) for t in m.vertex_types)),
        simple=simple,
        polyhedral=m.is_polyhedral() if simple else False,
        vertex_orbit_count=len(m.vertex_orbits(autos)),
        automorphism_count=len(autos),
    )
