"""Interval and convex-polygon geometry.

Minkowski combinations, symmetric differences, the homothetic distance
``A(K, C)`` with the Brunn-Minkowski stability bound, shift recovery for
nearly optimal triples, lifted bodies of 1-D log-concave functions and
sumsets of interval unions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bodies import CONVEX_TOL, ConvexBody, Interval, Polygon, _prune
from .core.checks import BoundCheck
from .core.functions import LogConcaveFunction, superlevel_set
from .errors import DegenerateBody, LevelAboveMax, MixedVariants, OverlappingInput, PreconditionViolated, ValidationError


def _same_variant(K, C):
    if type(K) is not type(C):
        raise MixedVariants(f"cannot combine {type(K).__name__} with {type(C).__name__}")


def volume(K: ConvexBody) -> float:
    """Length of an interval or area of a polygon."""
    return float(K.length if isinstance(K, Interval) else K.area)


def _edges_from_bottom(v: np.ndarray) -> np.ndarray:
    start = np.lexsort((v[:, 0], v[:, 1]))[0]
    v = np.roll(v, -start, axis=0)
    return v[0], np.roll(v, -1, axis=0) - v


def minkowski_combine(K: ConvexBody, C: ConvexBody, alpha: float = 1.0, beta: float = 1.0) -> ConvexBody:
    """``alpha K + beta C`` for two intervals or two convex polygons.

    Polygons are summed by merging their edge sequences by angle, both
    started at the lowest (then leftmost) vertex.
    """
    _same_variant(K, C)
    if alpha <= 0 or beta <= 0:
        raise ValidationError("Minkowski coefficients must be positive")
    if isinstance(K, Interval):
        return Interval(alpha * K.a + beta * C.a, alpha * K.b + beta * C.b)
    p0, e1 = _edges_from_bottom(alpha * K.vertices)
    q0, e2 = _edges_from_bottom(beta * C.vertices)
    # angles in [0, 2 pi) measured from the bottom vertex keep the merge monotone
    a1 = np.mod(np.arctan2(e1[:, 1], e1[:, 0]), 2 * np.pi)
    a2 = np.mod(np.arctan2(e2[:, 1], e2[:, 0]), 2 * np.pi)
    edges = np.concatenate((e1, e2))
    order = np.argsort(np.concatenate((a1, a2)), kind="stable")
    pts = (p0 + q0) + np.concatenate(([np.zeros(2)], np.cumsum(edges[order], axis=0)[:-1]))
    return Polygon(_prune(pts))


def clip_convex(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clipping of one convex ccw polygon by another.

    Returns the (possibly empty or degenerate) vertex array of the
    intersection.
    """
    out = np.asarray(subject, dtype=float)
    scale = max(1.0, float(np.abs(subject).max()), float(np.abs(clip).max()))
    eps = CONVEX_TOL * scale
    n = len(clip)
    for k in range(n):
        if len(out) == 0:
            break
        a, b = clip[k], clip[(k + 1) % n]
        e = b - a
        side = e[0] * (out[:, 1] - a[1]) - e[1] * (out[:, 0] - a[0])
        side = np.where(np.abs(side) <= eps * np.hypot(*e), 0.0, side)
        nxt_pts = np.roll(out, -1, axis=0)
        nxt_side = np.roll(side, -1)
        new = []
        for p, q, sp, sq in zip(out, nxt_pts, side, nxt_side):
            if sp >= 0:
                new.append(p)
            if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
                t = sp / (sp - sq)
                new.append(p + t * (q - p))
        out = np.array(new).reshape(-1, 2)
    return out


def _shoelace(v: np.ndarray) -> float:
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def intersection_volume(K: ConvexBody, C: ConvexBody) -> float:
    _same_variant(K, C)
    if isinstance(K, Interval):
        return max(0.0, min(K.b, C.b) - max(K.a, C.a))
    return _shoelace(clip_convex(K.vertices, C.vertices))


def symmetric_difference_volume(K: ConvexBody, C: ConvexBody) -> float:
    """``|K delta C| = |K| + |C| - 2 |K cap C|``."""
    return max(0.0, volume(K) + volume(C) - 2.0 * intersection_volume(K, C))


def gamma_star(n: int) -> float:
    """Stability factor ``((2 - 2^((n-1)/n))^(3/2) / (122 n^7))^2``."""
    return ((2 - 2 ** ((n - 1) / n)) ** 1.5 / (122 * n**7)) ** 2


def _translate(K: ConvexBody, t) -> ConvexBody:
    if isinstance(K, Interval):
        return K.translate(float(np.ravel(t)[0]))
    return K.translate(t)


def _scale(K: ConvexBody, c: float) -> ConvexBody:
    return K.scale(c)


def _centroid(K: ConvexBody) -> np.ndarray:
    return np.atleast_1d(np.asarray(K.centroid, dtype=float))


def pattern_search(
    objective: Callable[[np.ndarray], float],
    center: np.ndarray,
    box: float,
    tol: float,
    coarse: int = 17,
) -> tuple[np.ndarray, float]:
    """Coarse grid over a box followed by compass search.

    The grid has ``coarse`` points per axis over ``center +- box/2``; the
    compass search moves along the axes and diagonals, halving the step
    until it drops below ``tol``. Ties prefer the smaller-norm point.
    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    d = len(center)
    ticks = np.linspace(-box / 2, box / 2, coarse)
    grids = np.meshgrid(*([ticks] * d), indexing="ij")
    cands = center + np.stack([g.ravel() for g in grids], axis=1)
    vals = np.array([objective(c) for c in cands])
    key = np.lexsort((np.linalg.norm(cands, axis=1), vals))
    best = cands[key[0]]
    best_val = vals[key[0]]
    if d == 1:
        dirs = np.array([[1.0], [-1.0]])
    else:
        dirs = np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        dirs[4:] /= math.sqrt(2)
    step = box / (coarse - 1)
    while step >= tol:
        moved = False
        for dv in dirs:
            c = best + step * dv
            v = objective(c)
            if v < best_val - 1e-15 or (v <= best_val and np.linalg.norm(c) < np.linalg.norm(best) - 1e-15):
                best, best_val, moved = c, v, True
        if not moved:
            step *= 0.5
    return best, float(best_val)


@dataclass(frozen=True)
class StabilityFunctional:
    """Homothetic distance ``A``, volume ratio ``sigma`` and ``gamma*(n)``."""

    A: float
    sigma: float
    gamma_star: float
    translation: np.ndarray = field(repr=False)
    n: int = 1


def _check_body(K: ConvexBody):
    if volume(K) <= 0:
        raise DegenerateBody("convex body has empty interior")


def homothetic_distance(K: ConvexBody, C: ConvexBody) -> StabilityFunctional:
    """``A(K, C) = min_x |alpha K delta (x + beta C)|`` with unit-volume scalings."""
    _same_variant(K, C)
    _check_body(K)
    _check_body(C)
    n = K.dim
    vk, vc = volume(K), volume(C)
    Ks = _scale(K, vk ** (-1 / n))
    Cs = _scale(C, vc ** (-1 / n))
    diam = Ks.diameter + Cs.diameter
    start = _centroid(Ks) - _centroid(Cs)

    def obj(x):
        return symmetric_difference_volume(Ks, _translate(Cs, x))

    x, a = pattern_search(obj, start, diam, 1e-7 * diam)
    return StabilityFunctional(min(a, 2.0), max(vc / vk, vk / vc), gamma_star(n), x, n)


@dataclass(frozen=True)
class BMStabilityReport:
    functional: StabilityFunctional
    theorem: BoundCheck
    product_form: BoundCheck

    @property
    def holds(self) -> bool:
        return self.theorem.holds and self.product_form.holds


def check_bm_stability(K: ConvexBody, C: ConvexBody, tol: float = 1e-9) -> BMStabilityReport:
    """Both sides of the Brunn-Minkowski stability bound and its product form.

    ``|K+C|^(1/n) >= (|K|^(1/n) + |C|^(1/n)) (1 + gamma*/sigma^(1/n) A^2)`` and
    ``|(K+C)/2| >= sqrt(|K||C|) (1 + (sigma-1)^2/(32 n sigma^2) + n gamma*/sigma^(1/n) A^2)``.
    """
    sf = homothetic_distance(K, C)
    n = sf.n
    vk, vc = volume(K), volume(C)
    s = minkowski_combine(K, C)
    vs = volume(s)
    lhs1 = vs ** (1 / n)
    rhs1 = (vk ** (1 / n) + vc ** (1 / n)) * (1 + sf.gamma_star / sf.sigma ** (1 / n) * sf.A**2)
    lhs2 = vs / 2**n
    rhs2 = math.sqrt(vk * vc) * (
        1 + (sf.sigma - 1) ** 2 / (32 * n * sf.sigma**2) + n * sf.gamma_star / sf.sigma ** (1 / n) * sf.A**2
    )
    scale1 = max(1.0, rhs1)
    scale2 = max(1.0, rhs2)
    return BMStabilityReport(
        sf,
        BoundCheck("bm_stability", lhs1, rhs1, sense=">=", tol=tol * scale1, params={"n": n}),
        BoundCheck("bm_product", lhs2, rhs2, sense=">=", tol=tol * scale2, params={"n": n}),
    )


def brunn_minkowski_slack(K: ConvexBody, C: ConvexBody, alpha: float = 1.0, beta: float = 1.0) -> float:
    """``|alpha K + beta C|^(1/n) - alpha |K|^(1/n) - beta |C|^(1/n)``."""
    n = K.dim
    s = minkowski_combine(K, C, alpha, beta)
    return volume(s) ** (1 / n) - alpha * volume(K) ** (1 / n) - beta * volume(C) ** (1 / n)


def _inflate(L: ConvexBody, factor: float) -> ConvexBody:
    """Dilate about the centroid by ``factor``."""
    if isinstance(L, Interval):
        c = L.centroid
        r = 0.5 * L.length * factor
        return Interval(c - r, c + r)
    return L.scale(factor, about=L.centroid)


def _contains(L: ConvexBody, S: ConvexBody, tol: float) -> bool:
    if isinstance(L, Interval):
        return L.contains(S, tol)
    return L.contains(S, tol)


@dataclass(frozen=True)
class ShiftReport:
    w: np.ndarray
    diff_K: float
    diff_C: float
    bound: float
    eta: float
    n: int

    @property
    def holds(self) -> bool:
        return self.diff_K <= self.bound * (1 + 1e-12) + 1e-12 and self.diff_C <= self.bound * (1 + 1e-12) + 1e-12

    def checks(self) -> list[BoundCheck]:
        p = {"n": self.n, "eta": self.eta}
        return [
            BoundCheck("lemma31_K", self.diff_K, self.bound, tol=1e-12 * max(1.0, self.bound), params=p),
            BoundCheck("lemma31_C", self.diff_C, self.bound, tol=1e-12 * max(1.0, self.bound), params=p),
        ]


def recover_shift_lemma31(K: ConvexBody, C: ConvexBody, L: ConvexBody, eta: float) -> ShiftReport:
    """Shift ``w`` that aligns ``K`` with ``L - w`` and ``C`` with ``L + w``.

    Preconditions: ``|C| = |K|``, ``|L| <= (1 + eta)|K|`` and
    ``K/2 + C/2 ⊆ L``; :class:`PreconditionViolated` otherwise. The
    bound ``245 n^7 sqrt(eta) |K|`` is reported alongside both symmetric
    differences; ``w`` minimises their sum.
    """
    _same_variant(K, C)
    _same_variant(K, L)
    if eta < 0:
        raise PreconditionViolated("eta must be nonnegative")
    vk, vc, vl = volume(K), volume(C), volume(L)
    if abs(vc - vk) > 1e-9 * vk:
        raise PreconditionViolated(f"|C| = {vc:.12g} differs from |K| = {vk:.12g}")
    if vl > (1 + eta) * vk * (1 + 1e-6):
        raise PreconditionViolated(f"|L| = {vl:.12g} exceeds (1+eta)|K| = {(1 + eta) * vk:.12g}")
    mid = minkowski_combine(K, C, 0.5, 0.5)
    if not _contains(L, mid, 1e-9):
        raise PreconditionViolated("K/2 + C/2 is not contained in L")
    n = K.dim
    diam = K.diameter + C.diameter
    start = 0.5 * (_centroid(C) - _centroid(K))

    def obj(w):
        return symmetric_difference_volume(K, _translate(L, -w)) + symmetric_difference_volume(C, _translate(L, w))

    w, _ = pattern_search(obj, start, diam, 1e-7 * diam)
    dk = symmetric_difference_volume(K, _translate(L, -w))
    dc = symmetric_difference_volume(C, _translate(L, w))
    return ShiftReport(w, dk, dc, 245 * n**7 * math.sqrt(eta) * vk, float(eta), n)


def inflate_for_eta(K: ConvexBody, C: ConvexBody, eta: float) -> ConvexBody:
    """``L`` = ``K/2 + C/2`` dilated about its centroid to volume ``(1 + eta)|K/2 + C/2|``."""
    mid = minkowski_combine(K, C, 0.5, 0.5)
    return _inflate(mid, (1 + eta) ** (1 / K.dim))


def lift_body(f: LogConcaveFunction, xi: float) -> Polygon:
    """The region ``{(x, s): f(x) >= xi, ln xi <= s <= ln f(x)}`` as a polygon.

    Its vertices are the two base corners at height ``ln xi`` and the knots
    of the log-graph over ``{f >= xi}``, including the two crossing points.
    """
    m = float(np.exp(-f.potential.min()))
    if not (0 < xi < m):
        raise LevelAboveMax(f"lift level {xi:.6g} must lie in (0, max f = {m:.6g})")
    iv = superlevel_set(f, xi)
    x, u = f.knots, f.potential
    inner = (x > iv.a) & (x < iv.b)
    top_x = np.concatenate(([iv.a], x[inner], [iv.b]))
    base = math.log(xi)
    top_s = np.maximum(-np.interp(top_x, x, u), base)
    # counterclockwise: base corners left to right, then the graph right to left
    verts = np.concatenate(([[iv.a, base], [iv.b, base]], np.column_stack((top_x, top_s))[::-1]))
    return Polygon(_prune(verts))


def lift_area(f: LogConcaveFunction, xi: float) -> float:
    """``int_{f >= xi} (ln f - ln xi) dx`` summed cell by cell."""
    iv = superlevel_set(f, xi)
    x, u = f.knots, f.potential
    inner = (x > iv.a) & (x < iv.b)
    xs = np.concatenate(([iv.a], x[inner], [iv.b]))
    hs = np.maximum(-np.interp(xs, x, u) - math.log(xi), 0.0)
    return float(np.sum(0.5 * (hs[:-1] + hs[1:]) * np.diff(xs)))


def _merge_intervals(iv: np.ndarray) -> np.ndarray:
    iv = iv[np.argsort(iv[:, 0])]
    out = [iv[0].copy()]
    for a, b in iv[1:]:
        if a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append(np.array([a, b]))
    return np.array(out)


def _as_union(X) -> np.ndarray:
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    if np.any(X[:, 1] <= X[:, 0]):
        raise ValidationError("each interval needs a < b")
    X = X[np.argsort(X[:, 0])]
    if np.any(X[1:, 0] < X[:-1, 1]):
        raise OverlappingInput("intervals in a union must be disjoint")
    return X


@dataclass(frozen=True)
class SumsetReport:
    sumset: np.ndarray
    delta: float
    applicable: bool
    I: Interval
    J: Interval
    gap_I: float
    gap_J: float

    @property
    def holds(self) -> bool:
        if not self.applicable:
            return True
        tol = 1e-12 * max(1.0, self.delta)
        return self.gap_I <= self.delta + tol and self.gap_J <= self.delta + tol


def interval_union_sumset(X, Y) -> SumsetReport:
    """Exact sumset of two disjoint interval unions and the 1-D stability check.

    ``delta = |X+Y| - |X| - |Y|``. When ``delta < min(|X|, |Y|)`` the
    convex hulls ``I`` of ``X`` and ``J`` of ``Y`` satisfy
    ``|I \\ X| <= delta`` and ``|J \\ Y| <= delta``. The inequality must be
    strict: ``X = [0,1] u [10,11]``, ``Y = [0,1]`` has ``delta = min = 1``
    but ``|I \\ X| = 9``. Gaps are reported in either case.
    """
    X, Y = _as_union(X), _as_union(Y)
    sums = (X[:, None, :] + Y[None, :, :]).reshape(-1, 2)
    S = _merge_intervals(sums)
    lx, ly = float(np.sum(X[:, 1] - X[:, 0])), float(np.sum(Y[:, 1] - Y[:, 0]))
    delta = float(np.sum(S[:, 1] - S[:, 0])) - lx - ly
    I = Interval(float(X[0, 0]), float(X[-1, 1]))
    J = Interval(float(Y[0, 0]), float(Y[-1, 1]))
    applicable = delta < min(lx, ly) - 1e-12 * max(1.0, lx, ly)
    return SumsetReport(S, delta, applicable, I, J, I.length - lx, J.length - ly)
