"""Vertex types (cyclic tuples of face sizes) and their angle-sum analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .hypkernel import PolygonMetrics, regular_polygon_metrics

TWO_PI = 2 * math.pi


class InvalidVertexType(ValueError):
    pass


def canonical_cycle(seq: Iterable[int]) -> tuple[int, ...]:
    """Lexicographically least rotation of ``seq`` or of its reversal."""
    s = tuple(seq)
    if not s:
        return s
    r = s[::-1]
    n = len(s)
    return min(min(t[i:] + t[:i] for i in range(n)) for t in (s, r))


@dataclass(frozen=True, order=True)
class VertexType:
    """A cyclic tuple ``[k_1, ..., k_d]`` up to rotation and mirror image."""

    faces: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(k) for k in self.faces)
        if len(f) < 3:
            raise InvalidVertexType(f"a vertex needs degree at least 3, got {list(f)}")
        if any(k < 3 for k in f):
            raise InvalidVertexType(f"face sizes must be at least 3, got {list(f)}")
        object.__setattr__(self, "faces", canonical_cycle(f))

    @classmethod
    def parse(cls, text: str) -> VertexType:
        try:
            return cls(tuple(int(x) for x in text.replace("[", "").replace("]", "").split(",")))
        except ValueError as exc:
            raise InvalidVertexType(f"cannot parse vertex type {text!r}: {exc}") from None

    @classmethod
    def p33(cls, p: int) -> VertexType:
        return cls((p, p, p, 3))

    @property
    def degree(self) -> int:
        return len(self.faces)

    def alpha(self) -> Fraction:
        return sum((Fraction(k - 2, k) for k in self.faces), Fraction(0))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.faces)) + "]"


def angle_sum_at(faces: Iterable[int], s: float) -> float:
    """Sum of interior angles of regular k-gons with common edge length ``s``."""
    c = math.cosh(s / 2)
    return sum(2 * math.asin(math.cos(math.pi / k) / c) for k in faces)


def solve_edge_length(faces: tuple[int, ...], hi: float = 10.0,
                      max_iter: int = 200, tol: float = 1e-12) -> float:
    """Edge length at which the regular faces fit exactly around a vertex.

    The angle sum is strictly decreasing in ``s`` so plain bisection on
    ``(0, hi]`` converges; Newton is avoided on purpose.
    """
    lo = 0.0
    mid = hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        resid = angle_sum_at(faces, mid) - TWO_PI
        if abs(resid) < tol:
            break
        if resid > 0:
            lo = mid
        else:
            hi = mid
    return mid


@dataclass(frozen=True)
class TypeAnalysis:
    vertex_type: VertexType
    alpha: Fraction
    curvature_class: str
    edge_length: float | None = None
    metrics: dict[int, PolygonMetrics] = field(default_factory=dict)

    @property
    def angles(self) -> list[float]:
        return [self.metrics[k].theta for k in self.vertex_type.faces]

    def angle_residual(self) -> float:
        if self.edge_length is None:
            return float("nan")
        return abs(sum(self.angles) - TWO_PI)

    def to_dict(self) -> dict:
        out = {
            "type": list(self.vertex_type.faces),
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "class": self.curvature_class,
        }
        if self.edge_length is not None:
            out["edge_length"] = self.edge_length
            out["faces"] = {
                str(k): {"theta": m.theta, "s": m.s, "R": m.R, "r": m.r}
                for k, m in sorted(self.metrics.items())
            }
            out["angle_residual"] = self.angle_residual()
        return out


def classify(alpha: Fraction) -> str:
    if alpha < 2:
        return "spherical"
    if alpha == 2:
        return "euclidean"
    return "hyperbolic"


def analyze_type(t: VertexType) -> TypeAnalysis:
    alpha = t.alpha()
    cls = classify(alpha)
    if cls != "hyperbolic":
        return TypeAnalysis(t, alpha, cls)
    s = solve_edge_length(t.faces)
    c = math.cosh(s / 2)
    metrics = {}
    for k in sorted(set(t.faces)):
        theta = 2 * math.asin(math.cos(math.pi / k) / c)
        metrics[k] = regular_polygon_metrics(k, theta)
    return TypeAnalysis(t, alpha, cls, s, metrics)
