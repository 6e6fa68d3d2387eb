"""Small classical maps used as references and in tests."""
from __future__ import annotations

import json
from importlib import resources

from . import fmio
from .surfmap import FlagMap


def tetrahedron() -> FlagMap:
    return FlagMap.from_faces([(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 3, 0)])


def cube() -> FlagMap:
    return FlagMap.from_faces([
        (0, 1, 2, 3), (4, 7, 6, 5), (0, 4, 5, 1),
        (1, 5, 6, 2), (2, 6, 7, 3), (3, 7, 4, 0),
    ])


def octahedron() -> FlagMap:
    # poles 0 and 5 over the square 1-2-3-4
    faces = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        faces.append((0, a, b))
        faces.append((5, b, a))
    return FlagMap.from_faces(faces)


def icosahedron() -> FlagMap:
    # poles 0 and 11, upper ring 1..5, lower ring 6..10
    up = [1 + i for i in range(5)]
    lo = [6 + i for i in range(5)]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces.append((0, up[i], up[j]))
        faces.append((up[i], lo[i], up[j]))
        faces.append((up[j], lo[i], lo[j]))
        faces.append((11, lo[j], lo[i]))
    return FlagMap.from_faces(faces)


def prism(s: int) -> FlagMap:
    top = list(range(s))
    bot = [s + i for i in range(s)]
    faces = [tuple(top), tuple(reversed(bot))]
    for i in range(s):
        j = (i + 1) % s
        faces.append((top[j], top[i], bot[i], bot[j]))
    return FlagMap.from_faces(faces)


def antiprism(s: int) -> FlagMap:
    """The s-gonal antiprism, vertex type [3,3,3,s]."""
    if s < 3:
        raise ValueError("an antiprism needs s >= 3")
    top = list(range(s))
    bot = [s + i for i in range(s)]
    faces = [tuple(top), tuple(reversed(bot))]
    for i in range(s):
        j = (i + 1) % s
        faces.append((top[j], top[i], bot[i]))
        faces.append((top[j], bot[i], bot[j]))
    return FlagMap.from_faces(faces)


def pseudorhombicuboctahedron() -> FlagMap:
    """Elongated square gyrobicupola: type [3,4,4,4] but not vertex-transitive."""
    t = list(range(4))
    u = [4 + j for j in range(8)]
    lo = [12 + j for j in range(8)]
    b = [20 + i for i in range(4)]
    faces = [tuple(t), tuple(reversed(b))]
    for i in range(4):
        i1 = (i + 1) % 4
        faces.append((t[i], u[2 * i], u[2 * i + 1]))
        faces.append((t[i], u[2 * i + 1], u[(2 * i + 2) % 8], t[i1]))
    for j in range(8):
        j1 = (j + 1) % 8
        faces.append((u[j], lo[j], lo[j1], u[j1]))
    # lower cupola turned by one step relative to the upper one
    for i in range(4):
        i1 = (i + 1) % 4
        faces.append((b[i], lo[(2 * i + 2) % 8], lo[2 * i + 1]))
        faces.append((b[i], b[i1], lo[(2 * i + 3) % 8], lo[(2 * i + 2) % 8]))
    return FlagMap.from_faces(faces)


def torus_bouquet() -> FlagMap:
    """One vertex with two loops on the torus; not a simple graph."""
    return FlagMap.from_darts(sigma=[1, 2, 3, 0], alpha=[2, 3, 0, 1])


def dipole(k: int = 3) -> FlagMap:
    """Two vertices joined by ``k`` parallel edges on the sphere."""
    sigma = [(d + 1) % k for d in range(k)] + [k + (d - 1) % k for d in range(k)]
    alpha = [k + d for d in range(k)] + list(range(k))
    return FlagMap.from_darts(sigma, alpha)


def disjoint_union(a: FlagMap, b: FlagMap) -> FlagMap:
    """Side-by-side copy of two maps; fails validation as disconnected."""
    n = a.n
    return FlagMap(*(list(x) + [n + y for y in z] for x, z in
                     ((a.s0, b.s0), (a.s1, b.s1), (a.s2, b.s2))))


CLASSICAL = {
    "tetrahedron": tetrahedron,
    "cube": cube,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "antiprism4": lambda: antiprism(4),
    "prism5": lambda: prism(5),
    "pseudorhombicuboctahedron": pseudorhombicuboctahedron,
}


WITNESS_SETS = (
    "chi-1_all",
    "chi-1_polyhedral",
    "chi-2_polyhedral_orientable",
    "chi-2_polyhedral_nonorientable",
    "chi-5_p7_first",
)


def _witness_dir(name: str):
    if name not in WITNESS_SETS:
        raise KeyError(f"unknown witness set {name!r}; choose from {WITNESS_SETS}")
    return resources.files("qvtmaps").joinpath("data", "witnesses", name)


def witness_manifest(name: str) -> dict:
    """Manifest stored with a packaged census result."""
    return json.loads(_witness_dir(name).joinpath("manifest.json").read_text())


def witnesses(name: str) -> list[FlagMap]:
    """Maps of a packaged census result, in manifest order."""
    d = _witness_dir(name)
    return [fmio.loads(d.joinpath(rec["file"]).read_text())
            for rec in witness_manifest(name)["maps"]]
