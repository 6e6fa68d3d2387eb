"""Hyperbolic plane geometry in the hyperboloid model.

Points live on the upper sheet ``x^2 + y^2 - z^2 = -1``; isometries are
3x3 Lorentz matrices acting linearly, so composition is a matrix product.
The Poincare disk only appears at render time via :meth:`HPoint.to_disk`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ALGEBRAIC_TOL = 1e-10
CONSTRUCTION_TOL = 1e-9

J = np.diag([1.0, 1.0, -1.0])
J.setflags(write=False)


class GeometryError(ValueError):
    pass


class DegenerateGeodesic(GeometryError):
    pass


class AngleOutOfRange(GeometryError):
    pass


def minkowski(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


def _to_sheet(v: np.ndarray) -> np.ndarray:
    # keep the spatial part, recompute z; stable for far-out points
    x, y = float(v[0]), float(v[1])
    return np.array([x, y, math.sqrt(1.0 + x * x + y * y)])


@dataclass(frozen=True, eq=False)
class HPoint:
    """A point of the hyperbolic plane, stored as hyperboloid coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (3,):
            raise GeometryError(f"expected 3 coordinates, got shape {c.shape}")
        c = _to_sheet(c)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def origin(cls) -> HPoint:
        return cls(np.array([0.0, 0.0, 1.0]))

    @classmethod
    def from_polar(cls, radius: float, angle: float) -> HPoint:
        """Point at hyperbolic distance ``radius`` from the origin in direction ``angle``."""
        s = math.sinh(radius)
        return cls(np.array([s * math.cos(angle), s * math.sin(angle), math.cosh(radius)]))

    @classmethod
    def from_disk(cls, u: float, v: float) -> HPoint:
        r2 = u * u + v * v
        if r2 >= 1.0:
            raise GeometryError("disk point outside the open unit disk")
        d = 1.0 - r2
        return cls(np.array([2 * u / d, 2 * v / d, (1 + r2) / d]))

    @property
    def x(self) -> float:
        return float(self.coords[0])

    @property
    def y(self) -> float:
        return float(self.coords[1])

    @property
    def z(self) -> float:
        return float(self.coords[2])

    def to_disk(self) -> tuple[float, float]:
        """Central projection to the Poincare disk."""
        c = self.coords
        return float(c[0] / (1.0 + c[2])), float(c[1] / (1.0 + c[2]))

    def norm_defect(self) -> float:
        return abs(minkowski(self.coords, self.coords) + 1.0)

    def __repr__(self) -> str:
        return f"HPoint({self.x:.6g}, {self.y:.6g}, {self.z:.6g})"


def distance(a: HPoint, b: HPoint) -> float:
    # <a-b, a-b> = 4 sinh^2(d/2); avoids acosh cancellation for close points
    diff = a.coords - b.coords
    q = max(0.0, minkowski(diff, diff))
    return 2.0 * math.asinh(math.sqrt(q) / 2.0)


def midpoint(a: HPoint, b: HPoint) -> HPoint:
    s = a.coords + b.coords
    return HPoint(s / math.sqrt(-minkowski(s, s)))


def tangent_direction(at: HPoint, to: HPoint) -> float:
    """Angle (radians, in [0, 2pi)) of the geodesic from ``at`` towards ``to``.

    Measured in the tangent plane at ``at`` after moving ``at`` to the origin.
    """
    q = translation_to(at).inverse().apply(to)
    return math.atan2(q.y, q.x) % (2 * math.pi)


def corner_angle(prev: HPoint, at: HPoint, nxt: HPoint) -> float:
    """Interior angle at ``at`` of a counterclockwise polygon ``... prev, at, nxt ...``.

    The result lies in (0, 2pi), so reflex corners are reported as such.
    """
    a_next = tangent_direction(at, nxt)
    a_prev = tangent_direction(at, prev)
    ang = (a_prev - a_next) % (2 * math.pi)
    return ang


def polygon_area(points: list[HPoint]) -> float:
    """Area of a simple counterclockwise geodesic polygon, by Gauss-Bonnet."""
    n = len(points)
    total = sum(corner_angle(points[i - 1], points[i], points[(i + 1) % n]) for i in range(n))
    return (n - 2) * math.pi - total


@dataclass(frozen=True, eq=False)
class Isometry:
    """A motion of the hyperbolic plane, as a matrix preserving the Minkowski form."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise GeometryError(f"expected a 3x3 matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> Isometry:
        return cls(np.eye(3))

    @property
    def parity(self) -> int:
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    def apply(self, p: HPoint) -> HPoint:
        return HPoint(self.matrix @ p.coords)

    def __call__(self, p: HPoint) -> HPoint:
        return self.apply(p)

    def __matmul__(self, other: Isometry) -> Isometry:
        return Isometry(self.matrix @ other.matrix)

    def inverse(self) -> Isometry:
        # Lorentz matrices satisfy M^-1 = J M^T J
        return Isometry(J @ self.matrix.T @ J)

    def form_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.T @ J @ m - J)))

    def relative_form_defect(self) -> float:
        """Form defect scaled by the squared entry size.

        Entries grow like cosh of the translation length, so rounding alone
        leaves an absolute defect of about ``eps * max|M|^2``.
        """
        return self.form_defect() / max(1.0, float(np.max(np.abs(self.matrix)))) ** 2

    def close_to(self, other: Isometry, tol: float = ALGEBRAIC_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) < tol)

    def is_identity(self, tol: float = ALGEBRAIC_TOL) -> bool:
        return self.close_to(Isometry.identity(), tol)

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def __repr__(self) -> str:
        return f"Isometry(parity={self.parity}, trace={self.trace():.6g})"


def rotation_at_origin(angle: float) -> Isometry:
    c, s = math.cos(angle), math.sin(angle)
    return Isometry(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def boost(d: float) -> Isometry:
    """Translation by hyperbolic distance ``d`` along the x-axis geodesic."""
    ch, sh = math.cosh(d), math.sinh(d)
    return Isometry(np.array([[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]]))


def translation_to(p: HPoint) -> Isometry:
    """The transvection taking the origin to ``p`` along their geodesic."""
    r = math.asinh(math.hypot(p.x, p.y))  # acosh(z) loses points near the origin
    phi = math.atan2(p.y, p.x)
    return rotation_at_origin(phi) @ boost(r) @ rotation_at_origin(-phi)


def translate(p: HPoint, d: float, direction: float = 0.0) -> HPoint:
    """Move ``p`` distance ``d`` along the geodesic leaving it at angle ``direction``."""
    return translation_to(p).apply(HPoint.from_polar(d, direction))


def rotate_about(c: HPoint, angle: float) -> Isometry:
    t = translation_to(c)
    return t @ rotation_at_origin(angle) @ t.inverse()


def half_turn(m: HPoint) -> Isometry:
    return rotate_about(m, math.pi)


def reflect_across(a: HPoint, b: HPoint) -> Isometry:
    """Reflection in the geodesic through ``a`` and ``b``."""
    if distance(a, b) < 1e-9:
        raise DegenerateGeodesic("reflection axis needs two distinct points")
    n = J @ np.cross(a.coords, b.coords)
    nn = minkowski(n, n)
    n = n / math.sqrt(nn)
    return Isometry(np.eye(3) - 2.0 * np.outer(n, n) @ J)


def distance_to_geodesic(x: HPoint, a: HPoint, b: HPoint) -> float:
    n = J @ np.cross(a.coords, b.coords)
    n = n / math.sqrt(minkowski(n, n))
    return math.asinh(abs(minkowski(x.coords, n)))


def segment_map(a: HPoint, b: HPoint, a2: HPoint, b2: HPoint) -> Isometry:
    """Orientation-preserving isometry with ``a -> a2`` and ``b -> b2``.

    The segments must have equal length; the caller checks that.
    """
    ta, ta2 = translation_to(a), translation_to(a2)
    phi = tangent_direction(a, b)
    phi2 = tangent_direction(a2, b2)
    return ta2 @ rotation_at_origin(phi2 - phi) @ ta.inverse()


@dataclass(frozen=True)
class PolygonMetrics:
    """Regular hyperbolic k-gon with interior angle ``theta``.

    ``s`` is the edge length, ``R`` the circumradius and ``r`` the inradius.
    """

    k: int
    theta: float
    s: float
    R: float
    r: float

    def identity_defects(self) -> tuple[float, float, float]:
        k, th = self.k, self.theta
        d1 = math.cosh(self.s / 2) * math.sin(th / 2) - math.cos(math.pi / k)
        d2 = math.cosh(self.R) - 1.0 / math.tan(math.pi / k) / math.tan(th / 2)
        d3 = math.cosh(self.R) - math.cosh(self.r) * math.cosh(self.s / 2)
        return abs(d1), abs(d2), abs(d3)


def regular_polygon_metrics(k: int, theta: float) -> PolygonMetrics:
    if k < 3:
        raise AngleOutOfRange(f"a polygon needs at least 3 sides, got {k}")
    upper = (k - 2) * math.pi / k
    if not 0.0 < theta < upper:
        raise AngleOutOfRange(f"theta={theta!r} outside (0, {upper!r}) for k={k}")
    half = theta / 2
    s = 2 * math.acosh(max(1.0, math.cos(math.pi / k) / math.sin(half)))
    R = math.acosh(max(1.0, 1.0 / (math.tan(math.pi / k) * math.tan(half))))
    r = math.acosh(max(1.0, math.cos(half) / math.sin(math.pi / k)))
    return PolygonMetrics(k=k, theta=theta, s=s, R=R, r=r)
