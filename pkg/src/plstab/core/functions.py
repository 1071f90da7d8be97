"""Log-concave functions stored as piecewise-linear convex potentials.

A function ``f = exp(-u)`` is represented by the values of its potential
``u`` at a set of knots, with ``u`` linear between knots and ``+inf``
outside. Two concrete representations share one interface:

* :class:`PotentialGrid` -- knots on a uniform grid over ``[x_lo, x_hi]``;
  nodes outside the support carry an ``inf`` sentinel.
* :class:`PiecewiseLogLinear` -- arbitrary increasing knots, all finite.
  Exact results of sup-convolutions and rearrangements live here, since
  their breakpoints rarely fall on a uniform grid.

Everything downstream (integration, level sets, L1 distances) is exact
for this piecewise log-linear model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bodies import Interval
from ..errors import EmptySupport, NonLogConcaveInput, NonUniformGrid, ValidationError

TOL_CONVEX = 1e-9


def cell_integrals(width, u0, u1):
    """Exact integral of ``exp(-u)`` over cells where ``u`` is linear.

    Uses ``exp(-min) * (1 - exp(-|d|)) / |d|`` so neither overflow nor
    cancellation occurs when the endpoint potentials are close or far apart.
    """
    width = np.asarray(width, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    lo = np.minimum(u0, u1)
    d = np.abs(u1 - u0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(d > 1e-12, -np.expm1(-d) / np.where(d > 0, d, 1.0), 1.0 - 0.5 * d)
    out = width * np.exp(-lo) * ratio
    return np.where(np.isfinite(lo), out, 0.0)


def _second_differences(x, u):
    s = np.diff(u) / np.diff(x)
    return np.diff(s), s


def check_convex(x, u, tol_convex=TOL_CONVEX, what="potential"):
    """Raise :class:`NonLogConcaveInput` if finite ``u`` on knots ``x`` is not convex.

    The tolerance is relative to the potential range, so floating noise in
    analytic samples passes while a genuine dip does not.
    """
    if len(u) < 3:
        return
    dd, _ = _second_differences(x, u)
    # compare slope jumps scaled by cell width against the potential range
    span = max(1.0, float(np.ptp(u)))
    h = np.minimum(np.diff(x)[:-1], np.diff(x)[1:])
    bad = dd * h < -tol_convex * span
    if np.any(bad):
        i = int(np.argmax(bad)) + 1
        raise NonLogConcaveInput(
            f"{what} is not convex at knot {i} (x={x[i]:.6g}): "
            f"second difference {dd[i - 1] * h[i - 1]:.3e} below -{tol_convex * span:.1e}"
        )


class LogConcaveFunction:
    """Shared behaviour of the piecewise log-linear representations.

    Subclasses provide ``knots`` (increasing support knots) and
    ``potential`` (finite potential values at those knots).
    """

    knots: np.ndarray
    potential: np.ndarray

    @property
    def support(self) -> Interval:
        return Interval(float(self.knots[0]), float(self.knots[-1]))

    def potential_at(self, x):
        """Potential ``u(x)``, ``+inf`` outside the support.

        Points within a few ulps of an end of the support count as inside.
        """
        x = np.asarray(x, dtype=float)
        k = self.knots
        slack = 4 * np.finfo(float).eps * max(abs(k[0]), abs(k[-1]), 1.0)
        out = np.interp(x, k, self.potential)
        return np.where((x < k[0] - slack) | (x > k[-1] + slack), np.inf, out)

    def __call__(self, x):
        return np.exp(-self.potential_at(x))

    def cell_slopes(self) -> np.ndarray:
        """Slopes of the potential on each cell, made monotone.

        Inputs within the convexity tolerance may carry slope inversions of
        order ``tol``; the running maximum removes them so that slope-sorted
        searches stay well defined.
        """
        s = np.diff(self.potential) / np.diff(self.knots)
        return np.maximum.accumulate(s)

    def to_grid(self, n_nodes: int, x_lo=None, x_hi=None) -> "PotentialGrid":
        """Resample on a uniform grid (exact at the new nodes)."""
        lo = self.knots[0] if x_lo is None else x_lo
        hi = self.knots[-1] if x_hi is None else x_hi
        x = np.linspace(lo, hi, n_nodes)
        u = self.potential_at(x)
        # endpoints of the support may round just outside
        if x_lo is None:
            u[0] = self.potential[0]
        if x_hi is None:
            u[-1] = self.potential[-1]
        return PotentialGrid(float(lo), float(hi), u)


@dataclass(frozen=True, eq=False)
class PotentialGrid(LogConcaveFunction):
    """Uniform-grid potential: ``f(x) = exp(-u(x))`` on ``[x_lo, x_hi]``.

    ``u`` may hold ``+inf`` at nodes outside the support; finite entries
    form one contiguous block and are discretely convex.
    """

    x_lo: float
    x_hi: float
    u: np.ndarray
    tol_convex: float = TOL_CONVEX
    samples: np.ndarray | None = None

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.ndim != 1 or len(u) < 2:
            raise ValidationError("a PotentialGrid needs at least 2 nodes")
        if not self.x_lo < self.x_hi:
            raise ValidationError(f"need x_lo < x_hi, got {self.x_lo}, {self.x_hi}")
        if np.any(np.isnan(u)) or np.any(u == -np.inf):
            raise ValidationError("potential values must be finite or +inf")
        finite = np.flatnonzero(np.isfinite(u))
        if len(finite) == 0:
            raise EmptySupport("function is identically zero")
        if finite[-1] - finite[0] + 1 != len(finite):
            raise NonLogConcaveInput("support of f is not an interval (zero between positive values)")
        if len(finite) < 2:
            raise EmptySupport("support is a single node; the function has zero mass")
        x = np.linspace(self.x_lo, self.x_hi, len(u))
        check_convex(x[finite], u[finite], self.tol_convex)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        if self.samples is not None:
            v = np.array(self.samples, dtype=float)
            if v.shape != u.shape:
                raise ValidationError("samples must match the potential array")
            v.setflags(write=False)
            object.__setattr__(self, "samples", v)
        object.__setattr__(self, "_first", int(finite[0]))
        object.__setattr__(self, "_last", int(finite[-1]))

    @property
    def n_nodes(self) -> int:
        return len(self.u)

    @property
    def spacing(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n_nodes - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.n_nodes)

    @property
    def knots(self) -> np.ndarray:
        return self.nodes[self._first : self._last + 1]

    @property
    def potential(self) -> np.ndarray:
        return self.u[self._first : self._last + 1]

    @property
    def values(self) -> np.ndarray:
        """Density values at every node (0 outside the support).

        Grids built from samples return those samples unchanged, so that
        writing them back out reproduces the input digit for digit.
        """
        if self.samples is not None:
            return self.samples
        return np.exp(-self.u)


@dataclass(frozen=True, eq=False)
class PiecewiseLogLinear(LogConcaveFunction):
    """Log-concave function with arbitrary (non-uniform) knots."""

    knots: np.ndarray
    potential: np.ndarray
    tol_convex: float = TOL_CONVEX

    def __post_init__(self):
        x = np.array(self.knots, dtype=float)
        u = np.array(self.potential, dtype=float)
        if x.shape != u.shape or x.ndim != 1:
            raise ValidationError("knots and potential must be 1-D arrays of equal length")
        if len(x) < 2:
            raise EmptySupport("need at least two knots for positive mass")
        if not np.all(np.isfinite(u)) or not np.all(np.isfinite(x)):
            raise ValidationError("knots and potential values must be finite")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("knots must be strictly increasing")
        check_convex(x, u, self.tol_convex)
        x.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "knots", x)
        object.__setattr__(self, "potential", u)


def _uniform_check(x, rtol=1e-9):
    dx = np.diff(x)
    if np.any(dx <= 0):
        raise NonUniformGrid("grid must be strictly increasing")
    if np.ptp(dx) > rtol * max(abs(x[0]), abs(x[-1]), x[-1] - x[0]):
        raise NonUniformGrid(f"grid spacing varies by {np.ptp(dx):.3e}")


def make_grid_density(x, f_values=None, tol_convex: float = TOL_CONVEX) -> PotentialGrid:
    """Build a :class:`PotentialGrid` from density samples on a uniform grid.

    ``x`` and ``f_values`` are matching arrays, or ``x`` alone is a
    sequence of ``(x, f)`` pairs. Zero samples become the ``+inf``
    sentinel. Raises
    :class:`NonLogConcaveInput` when ``-log f`` is not discretely convex,
    :class:`EmptySupport` when every sample is zero and
    :class:`NonUniformGrid` for uneven spacing.
    """
    if f_values is None:
        pairs = np.asarray(x, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValidationError("samples must be (x, f) pairs")
        x, f_values = pairs[:, 0], pairs[:, 1]
    x = np.asarray(x, dtype=float)
    f = np.asarray(f_values, dtype=float)
    if x.shape != f.shape or x.ndim != 1 or len(x) < 2:
        raise ValidationError("need matching 1-D arrays of at least 2 samples")
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ValidationError("density samples must be finite and nonnegative")
    if not np.any(f > 0):
        raise EmptySupport("all samples are zero")
    _uniform_check(x)
    with np.errstate(divide="ignore"):
        u = -np.log(f)
    return PotentialGrid(float(x[0]), float(x[-1]), u, tol_convex, samples=f)


def integrate(f: LogConcaveFunction) -> float:
    """Exact integral of the piecewise log-linear function."""
    x, u = f.knots, f.potential
    return float(cell_integrals(np.diff(x), u[:-1], u[1:]).sum())


def partial_integral(f: LogConcaveFunction, a: float, b: float) -> float:
    """Exact integral of ``f`` over ``[a, b]``."""
    x, u = f.knots, f.potential
    lo, hi = max(a, x[0]), min(b, x[-1])
    if hi <= lo:
        return 0.0
    inner = (x > lo) & (x < hi)
    xs = np.concatenate(([lo], x[inner], [hi]))
    us = np.interp(xs, x, u)
    return float(cell_integrals(np.diff(xs), us[:-1], us[1:]).sum())


def max_point(f: LogConcaveFunction) -> tuple[float, float]:
    """Location and value of the maximum; ties go to the smallest ``x``."""
    i = int(np.argmin(f.potential))
    return float(f.knots[i]), float(np.exp(-f.potential[i]))


def _crossings(x, u, levels):
    """Endpoints of ``{u <= level}`` for each level (nan where empty)."""
    levels = np.atleast_1d(np.asarray(levels, dtype=float))
    i_min = int(np.argmin(u))
    # left branch: u non-increasing on x[:i_min+1]; right branch non-decreasing
    left_u = np.minimum.accumulate(u[: i_min + 1])
    right_u = np.maximum.accumulate(u[i_min:])
    # exp/log round trips can put the top level a few ulps below the minimum
    near = 8 * np.finfo(float).eps * max(1.0, abs(u[i_min]))
    levels = np.where((levels < u[i_min]) & (levels >= u[i_min] - near), u[i_min], levels)
    lo = np.full(levels.shape, np.nan)
    hi = np.full(levels.shape, np.nan)
    ok = levels >= u[i_min]

    # left: first index j with left_u[j] <= level
    rev = left_u[::-1]  # non-decreasing
    k = np.searchsorted(rev, levels[ok], side="right")  # count <= level
    j = i_min + 1 - k
    xl = x[j].astype(float)
    inside = j > 0
    jj = j[inside]
    u_out, u_in = u[jj - 1], u[jj]
    frac = (u_out - levels[ok][inside]) / (u_out - u_in)
    xl[inside] = x[jj - 1] + np.clip(frac, 0.0, 1.0) * (x[jj] - x[jj - 1])
    lo[ok] = xl

    m = np.searchsorted(right_u, levels[ok], side="right") - 1
    j = i_min + m
    xr = x[j].astype(float)
    inside = j < len(x) - 1
    jj = j[inside]
    u_in, u_out = u[jj], u[jj + 1]
    frac = (levels[ok][inside] - u_in) / (u_out - u_in)
    xr[inside] = x[jj] + np.clip(frac, 0.0, 1.0) * (x[jj + 1] - x[jj])
    hi[ok] = xr
    return lo, hi


def superlevel_set(f: LogConcaveFunction, t: float) -> Interval | None:
    """The interval ``{x : f(x) >= t}``, or ``None`` when it is empty."""
    if t <= 0:
        raise ValidationError("level t must be positive")
    lo, hi = _crossings(f.knots, f.potential, -np.log(t))
    if np.isnan(lo[0]):
        return None
    return Interval(float(lo[0]), float(hi[0]))


def level_volumes(f: LogConcaveFunction, t) -> np.ndarray:
    """Vectorised lengths of ``{f >= t}`` (0 for empty sets)."""
    t = np.asarray(t, dtype=float)
    lo, hi = _crossings(f.knots, f.potential, -np.log(t).ravel())
    return np.nan_to_num(hi - lo, nan=0.0).reshape(t.shape)


def translate_scale(f: LogConcaveFunction, a: float, z0: float) -> LogConcaveFunction:
    """Represent ``a * f(x - z0)``; the potential shifts down by ``ln a``."""
    if a <= 0:
        raise ValidationError("scale a must be positive")
    shift = np.log(a)
    if isinstance(f, PotentialGrid):
        return PotentialGrid(f.x_lo + z0, f.x_hi + z0, f.u - shift, f.tol_convex)
    return PiecewiseLogLinear(f.knots + z0, f.potential - shift, f.tol_convex)


def normalized(f: LogConcaveFunction) -> LogConcaveFunction:
    """The probability density ``f / integral(f)``."""
    return translate_scale(f, 1.0 / integrate(f), 0.0)


def moments(f: LogConcaveFunction) -> tuple[float, float]:
    """Mean and standard deviation of ``f / integral(f)`` (trapezoid on knots)."""
    x, w = f.knots, np.exp(-(f.potential - f.potential.min()))
    m0 = np.trapezoid(w, x)
    mean = np.trapezoid(w * x, x) / m0
    var = np.trapezoid(w * (x - mean) ** 2, x) / m0
    return float(mean), float(np.sqrt(max(var, 0.0)))
