"""Convex bodies in one and two dimensions.

An :class:`Interval` is a 1-D convex body, a :class:`Polygon` a 2-D one
stored as a counterclockwise vertex array. Both are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

CONVEX_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValidationError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if self.a > self.b:
            raise ValidationError(f"interval needs a <= b, got [{self.a}, {self.b}]")

    dim = 1

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def centroid(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def diameter(self) -> float:
        return self.b - self.a

    def contains(self, other: "Interval", tol: float = 1e-12) -> bool:
        scale = tol * max(1.0, abs(self.a), abs(self.b))
        return other.a >= self.a - scale and other.b <= self.b + scale

    def translate(self, t: float) -> "Interval":
        return Interval(self.a + t, self.b + t)

    def scale(self, c: float) -> "Interval":
        lo, hi = sorted((c * self.a, c * self.b))
        return Interval(lo, hi)


def _cross(o, a, b):
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


def convex_hull(points) -> np.ndarray:
    """Counterclockwise convex hull (monotone chain), collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        return pts
    scale = max(1.0, float(np.abs(pts).max()))
    tol = CONVEX_TOL * scale * scale

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= tol:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _prune(vertices: np.ndarray) -> np.ndarray:
    """Drop duplicate and collinear vertices from a convex ccw cycle."""
    v = np.asarray(vertices, dtype=float)
    scale = max(1.0, float(np.abs(v).max()))
    changed = True
    while changed and len(v) >= 3:
        changed = False
        nxt = np.roll(v, -1, axis=0)
        dup = np.all(np.abs(nxt - v) <= CONVEX_TOL * scale, axis=1)
        if dup.any():
            v = v[~dup]
            changed = True
            continue
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        edge = np.maximum(np.hypot(*(v - prev).T), np.hypot(*(nxt - v).T))
        flat = _cross(prev, v, nxt) <= CONVEX_TOL * scale * edge
        if flat.any():
            # remove one at a time so a fully flat polygon degenerates cleanly
            v = np.delete(v, int(np.argmax(flat)), axis=0)
            changed = True
    return v


@dataclass(frozen=True, eq=False)
class Polygon:
    vertices: np.ndarray

    dim = 2

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) < 3:
            raise ValidationError("polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise ValidationError("polygon vertices must be finite")
        scale = max(1.0, float(np.abs(v).max()))
        nxt = np.roll(v, -1, axis=0)
        if np.any(np.all(np.abs(nxt - v) <= CONVEX_TOL * scale, axis=1)):
            raise ValidationError("polygon has duplicate consecutive vertices")
        turn = _cross(np.roll(v, 1, axis=0), v, nxt)
        if np.any(turn <= CONVEX_TOL * scale * scale):
            raise ValidationError("polygon must be strictly convex and counterclockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_points(cls, points) -> "Polygon":
        """Convex hull of arbitrary points, as a valid polygon."""
        return cls(_prune(convex_hull(points)))

    @property
    def area(self) -> float:
        x, y = self.vertices.T
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def centroid(self) -> np.ndarray:
        x, y = self.vertices.T
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        c = x * yn - xn * y
        a = 0.5 * c.sum()
        return np.array([((x + xn) * c).sum(), ((y + yn) * c).sum()]) / (6.0 * a)

    @property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def translate(self, t) -> "Polygon":
        return Polygon(self.vertices + np.asarray(t, dtype=float))

    def scale(self, c: float, about=None) -> "Polygon":
        if c <= 0:
            raise ValidationError("scale factor must be positive")
        o = np.zeros(2) if about is None else np.asarray(about, dtype=float)
        return Polygon(o + c * (self.vertices - o))

    def contains_points(self, pts, tol: float = 1e-9) -> np.ndarray:
        """Boolean mask: which points lie in the polygon (edge slack ``tol * scale``)."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        scale = max(1.0, float(np.abs(v).max()), float(np.abs(pts).max(initial=0.0)))
        lens = np.hypot(e[:, 0], e[:, 1])
        # signed distance of each point to each edge line, positive inside
        rel = pts[:, None, :] - v[None, :, :]
        dist = (e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0]) / lens[None, :]
        return np.all(dist >= -tol * scale, axis=1)

    def contains(self, other: "Polygon", tol: float = 1e-9) -> bool:
        return bool(np.all(self.contains_points(other.vertices, tol)))


ConvexBody = Interval | Polygon
