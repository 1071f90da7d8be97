"""Legendre transforms and sup-convolutions of log-concave functions.

For ``f = exp(-u)`` and ``g = exp(-v)`` the sup-convolution

    h(z) = sup_{z = (1-lam) x + lam y} f(x)^(1-lam) g(y)^lam

has potential ``w`` with ``w* = (1-lam) u* + lam v*``. For piecewise-linear
potentials the conjugates are piecewise linear with breakpoints at the
cell slopes, so ``w`` is recovered exactly: each slope interval pairs a
maximising knot of ``u`` with one of ``v`` and contributes one vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core.functions import (
    LogConcaveFunction,
    PiecewiseLogLinear,
    PotentialGrid,
    integrate,
)
from .core.levels import LevelProfile
from .errors import (
    GridTooLarge,
    NonLogConcaveInput,
    NotDecreasing,
    NotLogConcave,
    ProfileNotLogConcave,
    SlopeRangeTooNarrow,
    ValidationError,
    WeightSumInvalid,
)

BRUTEFORCE_MAX_NODES = 2048


@dataclass(frozen=True, eq=False)
class ConjugateGrid:
    """Values ``u*(p) = max_x (p x - u(x))`` at increasing slopes ``p``."""

    slopes: np.ndarray
    u_star: np.ndarray

    def __post_init__(self):
        p = np.array(self.slopes, dtype=float)
        v = np.array(self.u_star, dtype=float)
        if p.shape != v.shape or p.ndim != 1 or len(p) < 2:
            raise ValidationError("slopes and conjugate values must be matching 1-D arrays")
        if np.any(np.diff(p) <= 0):
            raise ValidationError("slopes must be strictly increasing")
        p.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "slopes", p)
        object.__setattr__(self, "u_star", v)

    @property
    def slope_lo(self) -> float:
        return float(self.slopes[0])

    @property
    def slope_hi(self) -> float:
        return float(self.slopes[-1])

    @property
    def n_slopes(self) -> int:
        return len(self.slopes)

    def knot_positions(self) -> np.ndarray:
        """Slopes of ``u*`` between consecutive samples (the primal knots)."""
        return np.diff(self.u_star) / np.diff(self.slopes)


def _maximising_knot(cell_slopes: np.ndarray, p) -> np.ndarray:
    # node k maximises p x - u(x) when cell_slopes[k-1] <= p <= cell_slopes[k]
    return np.searchsorted(cell_slopes, p, side="left")


def _as_function(f) -> LogConcaveFunction:
    if isinstance(f, LogConcaveFunction):
        return f
    x, u = f
    return PiecewiseLogLinear(x, u)


def legendre_transform(f, slopes=None) -> ConjugateGrid:
    """Discrete Legendre transform of the potential of ``f``.

    ``f`` is a :class:`LogConcaveFunction` or an ``(x, u)`` pair. With no
    ``slopes`` given the conjugate is sampled at its own breakpoints (the
    cell slopes of ``u``) padded by one unit on either side, which
    determines it exactly. Explicit slopes must cover every cell slope,
    otherwise :class:`SlopeRangeTooNarrow` is raised.
    """
    f = _as_function(f)
    x, u = f.knots, f.potential
    s = f.cell_slopes()
    if slopes is None:
        us = np.unique(s)
        # slopes equal up to rounding carry no extra breakpoint
        keep = np.concatenate(([True], np.diff(us) > 1e-12 * np.maximum(1.0, np.abs(us[1:]))))
        slopes = np.concatenate(([s[0] - 1.0], us[keep], [s[-1] + 1.0]))
    else:
        slopes = np.asarray(slopes, dtype=float)
        if slopes[0] > s[0] or slopes[-1] < s[-1]:
            raise SlopeRangeTooNarrow(
                f"slopes [{slopes[0]:.6g}, {slopes[-1]:.6g}] do not cover the potential's "
                f"slope range [{s[0]:.6g}, {s[-1]:.6g}]"
            )
    k = _maximising_knot(s, slopes)
    # neighbours absorb slope inversions below the convexity tolerance
    cand = np.clip(k[:, None] + np.array([-1, 0, 1]), 0, len(x) - 1)
    vals = slopes[:, None] * x[cand] - u[cand]
    return ConjugateGrid(slopes, vals.max(axis=1))


def legendre_inverse(cg: ConjugateGrid, x) -> np.ndarray:
    """Evaluate ``max_p (p x - u*(p))`` over the sampled slopes."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    theta = np.maximum.accumulate(cg.knot_positions())
    j = np.searchsorted(theta, x, side="left")
    cand = np.clip(j[:, None] + np.arange(-2, 3), 0, cg.n_slopes - 1)
    return (cg.slopes[cand] * x[:, None] - cg.u_star[cand]).max(axis=1)


def _check_lambda(lam):
    if not (0.0 < lam < 1.0):
        raise ValidationError(f"lambda must lie in (0, 1), got {lam}")


def sup_convolution_exact(f: LogConcaveFunction, g: LogConcaveFunction, lam: float) -> PiecewiseLogLinear:
    """Exact sup-convolution ``h_lam`` as a piecewise log-linear function."""
    _check_lambda(lam)
    x, u, su = f.knots, f.potential, f.cell_slopes()
    y, v, sv = g.knots, g.potential, g.cell_slopes()
    s = np.unique(np.concatenate((su, sv)))
    # one representative slope strictly inside each interval between breakpoints
    reps = np.concatenate(([s[0] - 1.0], 0.5 * (s[:-1] + s[1:]), [s[-1] + 1.0]))
    i = _maximising_knot(su, reps)
    j = _maximising_knot(sv, reps)
    z = (1 - lam) * x[i] + lam * y[j]
    w = (1 - lam) * u[i] + lam * v[j]
    # coincident breakpoints produce repeated pairs; keep strictly increasing knots
    keep = np.concatenate(([True], np.diff(z) > 0))
    return PiecewiseLogLinear(z[keep], w[keep])


def minkowski_support(f: LogConcaveFunction, g: LogConcaveFunction, lam: float) -> tuple[float, float]:
    a = (1 - lam) * f.knots[0] + lam * g.knots[0]
    b = (1 - lam) * f.knots[-1] + lam * g.knots[-1]
    return float(a), float(b)


def sup_convolution(f: LogConcaveFunction, g: LogConcaveFunction, lam: float, n_out: int | None = None) -> PotentialGrid:
    """``h_lam`` on a uniform grid over ``(1-lam) supp f + lam supp g``.

    The default resolution is the larger of the two inputs' node counts.
    Node values are exact; see :func:`sup_convolution_exact` for the
    breakpoint representation.
    """
    h = sup_convolution_exact(f, g, lam)
    n = n_out or max(len(f.knots), len(g.knots))
    return h.to_grid(max(n, 2))


def _pair_min(z, xs, us, other, a, b):
    """min over x in xs of a*u(x) + b*v((z - a x) / b) for each z."""
    ok, ov = other.knots, other.potential
    span = max(1.0, abs(ok[0]), abs(ok[-1]))
    y = (z[:, None] - a * xs[None, :]) / b
    # snap round-off just outside the support back onto its end knots
    y = np.where(np.abs(y - ok[0]) <= 1e-12 * span, ok[0], y)
    y = np.where(np.abs(y - ok[-1]) <= 1e-12 * span, ok[-1], y)
    vals = a * us[None, :] + b * np.interp(y, ok, ov, left=np.inf, right=np.inf)
    return vals.min(axis=1)


def sup_convolution_bruteforce(
    f: LogConcaveFunction, g: LogConcaveFunction, lam: float, out_nodes=None
) -> PotentialGrid:
    """Exhaustive O(N^2) sup-convolution; the oracle for :func:`sup_convolution`.

    Each output node minimises ``(1-lam) u(x) + lam v(y)`` over decompositions
    ``z = (1-lam) x + lam y`` with ``x`` running over the knots of ``f``
    (``y`` interpolated) and with ``y`` over the knots of ``g``. The
    objective is piecewise linear in ``x`` with breakpoints exactly at those
    two families, so the sweep is exact at every output node.
    """
    _check_lambda(lam)
    if len(f.knots) > BRUTEFORCE_MAX_NODES or len(g.knots) > BRUTEFORCE_MAX_NODES:
        raise GridTooLarge(f"brute force is limited to {BRUTEFORCE_MAX_NODES} nodes per input")
    lo, hi = minkowski_support(f, g, lam)
    if out_nodes is None:
        out_nodes = max(len(f.knots), len(g.knots))
    z = np.linspace(lo, hi, out_nodes) if np.isscalar(out_nodes) else np.asarray(out_nodes, dtype=float)
    w = np.empty(len(z))
    for start in range(0, len(z), 256):
        zz = z[start : start + 256]
        w1 = _pair_min(zz, f.knots, f.potential, g, 1 - lam, lam)
        w2 = _pair_min(zz, g.knots, g.potential, f, lam, 1 - lam)
        w[start : start + 256] = np.minimum(w1, w2)
    return PotentialGrid(float(z[0]), float(z[-1]), w)


def _check_weights(lams) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    if lams.ndim != 1 or len(lams) < 2:
        raise WeightSumInvalid("need at least two weights")
    if np.any(lams <= 0) or abs(lams.sum() - 1.0) > 1e-12:
        raise WeightSumInvalid(f"weights must be positive and sum to 1, got sum {lams.sum():.17g}")
    return lams


def multi_sup_convolution_exact(fs: Sequence[LogConcaveFunction], lams) -> LogConcaveFunction:
    """``sup prod f_i(x_i)^lam_i`` over ``z = sum lam_i x_i``, by recursive halving.

    The first ``k = ceil(m/2)`` functions are combined with renormalised
    weights, likewise the rest, and the two results are joined with the
    weight of the second group.
    """
    lams = _check_weights(lams)
    if len(fs) != len(lams):
        raise ValidationError("need one weight per function")
    return _multi(list(fs), lams)


def _multi(fs, lams):
    m = len(fs)
    if m == 1:
        return fs[0]
    if m == 2:
        return sup_convolution_exact(fs[0], fs[1], float(lams[1]))
    k = math.ceil(m / 2)
    wa, wb = lams[:k].sum(), lams[k:].sum()
    ha = _multi(fs[:k], lams[:k] / wa)
    hb = _multi(fs[k:], lams[k:] / wb)
    # the weights sum to one, so wb is also 1 - wa up to rounding
    return sup_convolution_exact(ha, hb, float(wb))


def multi_sup_convolution(fs: Sequence[LogConcaveFunction], lams, n_out: int | None = None) -> PotentialGrid:
    """Gridded version of :func:`multi_sup_convolution_exact`.

    For two functions this is :func:`sup_convolution` with ``lam = lams[1]``.
    """
    h = multi_sup_convolution_exact(fs, lams)
    n = n_out or max(len(f.knots) for f in fs)
    return h.to_grid(max(n, 2))


def lambda_mass_profile(
    f: LogConcaveFunction, g: LogConcaveFunction, lam_grid, check: bool = True, tol: float = 1e-8
) -> list[tuple[float, float]]:
    """Masses ``phi(lam) = int h_lam`` with the endpoints ``phi(0), phi(1)`` appended.

    When the full sequence is uniformly spaced its discrete log-concavity
    is checked and :class:`ProfileNotLogConcave` raised on a violation
    beyond ``tol``.
    """
    lam_grid = np.asarray(lam_grid, dtype=float)
    if np.any((lam_grid <= 0) | (lam_grid >= 1)) or np.any(np.diff(lam_grid) <= 0):
        raise ValidationError("lambda grid must be sorted and inside (0, 1)")
    rows = [(0.0, integrate(f))]
    rows += [(float(lam), integrate(sup_convolution_exact(f, g, lam))) for lam in lam_grid]
    rows.append((1.0, integrate(g)))
    if check:
        lam = np.array([r[0] for r in rows])
        d = np.diff(lam)
        if np.ptp(d) <= 1e-9 * d.mean():
            worst = float(np.max(profile_second_differences(rows)))
            if worst > tol:
                raise ProfileNotLogConcave(f"log mass profile has second difference {worst:.3e} > {tol:.1e}")
    return rows


def profile_second_differences(rows) -> np.ndarray:
    """``ln phi[i+1] - 2 ln phi[i] + ln phi[i-1]``; log-concavity means all <= 0."""
    lp = np.log([r[1] for r in rows])
    return lp[2:] - 2 * lp[1:-1] + lp[:-2]


def _as_callable(H) -> Callable:
    if isinstance(H, LevelProfile):
        t, vol = H.t, H.vol

        def fn(s):
            s = np.asarray(s, dtype=float)
            # volumes are linear in ln t between samples, constant below the first
            out = np.interp(np.log(np.maximum(s, t[0])), np.log(t), vol, right=0.0)
            return np.where(s > H.max_level, 0.0, out)

        return fn
    return H


def borell_ball_transform(H, n_nodes: int = 2**18 + 1, truncation: float = 40.0) -> PotentialGrid:
    """The substitution ``h(x) = H(e^x) e^x`` on a uniform grid in ``x``.

    ``int h dx = int_0^inf H dt``. ``H`` is a callable on ``[0, inf)`` or a
    :class:`LevelProfile`. It must be decreasing (:class:`NotDecreasing`)
    and ``h`` must be log-concave (:class:`NotLogConcave`), which holds
    whenever ``H`` is log-concave and decreasing. The grid covers the
    range where ``-ln h`` stays within ``truncation`` of its minimum.
    """
    H = _as_callable(H)
    xs = np.linspace(-120.0, 120.0, 24001)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        hv = np.asarray(H(np.exp(xs)), dtype=float)
    if np.any(hv < 0) or np.any(np.isnan(hv)):
        raise ValidationError("H must be nonnegative")
    if np.any(np.diff(hv) > 1e-12 * np.maximum(hv[:-1], 1e-300)):
        i = int(np.argmax(np.diff(hv) > 1e-12 * np.maximum(hv[:-1], 1e-300)))
        raise NotDecreasing(f"H increases near t={math.exp(xs[i]):.6g}")
    with np.errstate(divide="ignore", over="ignore"):
        phi = -np.log(hv) - xs
    if not np.any(np.isfinite(phi)):
        raise ValidationError("H vanishes identically")
    cut = phi.min() + truncation
    inside = np.flatnonzero(phi <= cut)
    lo_i, hi_i = inside[0], inside[-1]

    def pot(x):
        with np.errstate(divide="ignore", over="ignore"):
            return -np.log(np.asarray(H(np.exp(x)), dtype=float)) - x

    def edge(a, b):
        # bisection for the crossing of pot = cut (or the support edge) between a and b
        inside_a = pot(a) <= cut
        for _ in range(200):
            m = 0.5 * (a + b)
            if (pot(m) <= cut) == inside_a:
                a = m
            else:
                b = m
            if b - a <= 1e-14 * max(1.0, abs(a)):
                break
        return a if inside_a else b

    x_lo = edge(xs[lo_i], xs[lo_i - 1]) if lo_i > 0 else xs[0]
    x_hi = edge(xs[hi_i], xs[hi_i + 1]) if hi_i < len(xs) - 1 else xs[-1]
    x = np.linspace(x_lo, x_hi, n_nodes)
    u = pot(x)
    try:
        return PotentialGrid(float(x[0]), float(x[-1]), u)
    except NonLogConcaveInput as exc:
        raise NotLogConcave(f"h(x) = H(e^x) e^x is not log-concave: {exc}") from exc
