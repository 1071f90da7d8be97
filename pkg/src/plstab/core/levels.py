"""Superlevel-set profiles, symmetric rearrangement and the level-set bounds.

The level-set bounds concern a log-concave probability density ``phi`` on
``R^n`` with maximum ``M``:

* ``|{phi >= (1-tau) M}| >= tau^n / ((n! + 1) M)`` for ``tau`` in (0, 1);
* for ``s < exp(-4(n-1))``: ``|{phi >= sM}| < 2 |ln s|^n / (n! M)``,
  ``int_0^{sM} |{phi >= t}| dt < (1 + 1/M) s |ln s|^n`` and
  ``mu(phi < sM) <= s |ln s|^n``.

They are evaluated on 1-D piecewise log-linear densities and on the
radial exponential family in any dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .analytic import RadialExp
from .checks import BoundCheck
from .functions import (
    LogConcaveFunction,
    PiecewiseLogLinear,
    _crossings,
    integrate,
    level_volumes,
    normalized,
    partial_integral,
    superlevel_set,
)

TAUS = tuple(np.round(np.arange(1, 10) / 10, 1))


@dataclass(frozen=True, eq=False)
class LevelProfile:
    """Sampled map ``t -> |{f >= t}|``; ``t`` increasing, volumes non-increasing."""

    t: np.ndarray
    vol: np.ndarray
    max_level: float

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        v = np.array(self.vol, dtype=float)
        if t.shape != v.shape or t.ndim != 1 or len(t) == 0:
            raise ValidationError("levels and volumes must be matching 1-D arrays")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValidationError("levels must be positive and strictly increasing")
        if np.any(v < 0) or np.any(np.diff(v) > 1e-12 * max(1.0, v.max())):
            raise ValidationError("volumes must be nonnegative and non-increasing")
        if np.any(v[t > self.max_level * (1 + 1e-12)] != 0):
            raise ValidationError("volume must vanish above the maximum")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "vol", v)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.vol.tolist()))

    def integral(self) -> float:
        """Layer-cake integral ``int_0^M vol(t) dt``.

        Volumes are treated as linear in ``ln t`` between samples (exact
        for piecewise log-linear functions once every knot level is
        sampled) and constant below the lowest sample.
        """
        t, v = self.t, self.vol
        keep = t <= self.max_level * (1 + 1e-15)
        t, v = t[keep], v[keep]
        total = t[0] * v[0]
        if len(t) > 1:
            t0, t1 = t[:-1], t[1:]
            q = np.log(t1 / t0)
            # int_t0^t1 ln(t/t0) dt = t0 (q e^q - expm1 q), summed as a series for small q
            qs = np.minimum(q, 0.05)
            series = sum((n - 1) / math.factorial(n) * qs**n for n in range(2, 12))
            phi = np.where(q < 0.05, series, q * np.exp(q) - np.expm1(q))
            total += float(np.sum(v[:-1] * (t1 - t0) + (v[1:] - v[:-1]) * t0 * np.divide(phi, q, out=np.zeros_like(q), where=q > 0)))
        return float(total)


def level_profile(f: LogConcaveFunction, n_levels: int = 512, floor: float = 1e-12) -> LevelProfile:
    """Volumes of ``{f >= t}`` at geometric levels in ``[floor M, M]``.

    The levels of every knot are added to the geometric ones so that
    :meth:`LevelProfile.integral` reproduces the exact mass.
    """
    if n_levels < 2:
        raise ValidationError("n_levels must be at least 2")
    u = f.potential
    m = float(np.exp(-u.min()))
    geo = np.geomspace(floor * m, m, n_levels)
    # volumes are taken in potential space: distinct knot potentials can
    # share one float level, and the float function then has the larger set
    pot = np.concatenate((-np.log(geo), u[np.isfinite(u)]))
    lo, hi = _crossings(f.knots, u, pot)
    vol_all = np.nan_to_num(hi - lo, nan=0.0)
    t_all = np.exp(-pot)
    keep = t_all > 0
    t, inv = np.unique(t_all[keep], return_inverse=True)
    vol = np.zeros(len(t))
    np.maximum.at(vol, inv, vol_all[keep])
    vol = np.minimum.accumulate(vol)  # guard last-bit noise
    return LevelProfile(t, vol, m)


def symmetric_decreasing_rearrangement(f: LogConcaveFunction) -> PiecewiseLogLinear:
    """Even, decreasing-in-``|x|`` function with the level volumes of ``f``.

    Knots sit at ``+-W(l)/2`` where ``W(l)`` is the length of
    ``{u <= l}`` at each knot level ``l`` of ``f``; between them the
    potential is linear, so the result is exact rather than resampled.
    """
    x, u = f.knots, f.potential
    top = max(u[0], u[-1])  # above this level the set is the whole support
    levels = np.unique(u[u <= top])
    w = np.asarray(level_volumes(f, np.exp(-levels)))
    w[-1] = x[-1] - x[0]
    # widths are strictly increasing in the level; drop float duplicates
    keep = np.concatenate(([True], np.diff(w) > 1e-14 * max(1.0, w[-1])))
    levels, w = levels[keep], w[keep]
    half = 0.5 * w
    if half[0] > 0:
        knots = np.concatenate((-half[::-1], half))
        pot = np.concatenate((levels[::-1], levels))
    else:
        knots = np.concatenate((-half[:0:-1], half))
        pot = np.concatenate((levels[:0:-1], levels))
    return PiecewiseLogLinear(knots, pot)


def s_threshold(n: int) -> float:
    """Upper end ``exp(-4(n-1))`` of the admissible range for ``s``."""
    return math.exp(-4.0 * (n - 1))


def default_s_grid(n: int, count: int = 24) -> np.ndarray:
    """Geometric sample of ``s`` in ``(0, exp(-4(n-1)))``."""
    top = s_threshold(n)
    return np.geomspace(top * 1e-10, top * (1 - 1e-3), count)


def closetomax_rhs(tau, n: int, m: float):
    return np.asarray(tau, dtype=float) ** n / ((math.factorial(n) + 1) * m)


def philessthans0_rhs(s, n: int, m: float):
    return 2 * np.abs(np.log(s)) ** n / (math.factorial(n) * m)


def philessthans_rhs(s, n: int, m: float):
    s = np.asarray(s, dtype=float)
    return (1 + 1 / m) * s * np.abs(np.log(s)) ** n


def muphiss_rhs(s, n: int):
    s = np.asarray(s, dtype=float)
    return s * np.abs(np.log(s)) ** n


def _level_terms_grid(p: LogConcaveFunction, s: float):
    """``(|{p >= sM}|, mu(p < sM), int_0^{sM} |{p >= t}| dt)`` for a probability density."""
    m = float(np.exp(-p.potential.min()))
    iv = superlevel_set(p, s * m)
    vol = iv.length
    below = max(0.0, 1.0 - partial_integral(p, iv.a, iv.b))
    return vol, below, s * m * vol + below


def level_bound_checks(
    phi,
    taus=TAUS,
    s_values=None,
    label: str = "",
) -> list[BoundCheck]:
    """Evaluate the four level-set bounds on a density.

    ``phi`` is either a 1-D :class:`LogConcaveFunction` (normalised to unit
    mass first) or a :class:`RadialExp` of any dimension (used with unit
    mass, so pass :meth:`RadialExp.probability`).
    """
    out = []
    if isinstance(phi, RadialExp):
        if abs(phi.mass - 1) > 1e-12:
            raise ValidationError("radial family must be a probability density")
        n, m = phi.n, phi.max

        def vol_at(level):
            return float(phi.level_volume(level))

        def terms(s):
            return vol_at(s * m), float(phi.mass_below(s)), float(phi.level_integral(s))

        kind = "radialexp"
    else:
        phi = normalized(phi)
        n = 1
        m = float(np.exp(-phi.potential.min()))

        def vol_at(level):
            return superlevel_set(phi, level).length

        def terms(s):
            return _level_terms_grid(phi, s)

        kind = "grid"
    base = {"kind": kind, "n": n, **({"f": label} if label else {})}
    for tau in taus:
        out.append(
            BoundCheck(
                "closetomax",
                vol_at((1 - tau) * m),
                float(closetomax_rhs(tau, n, m)),
                sense=">=",
                tol=1e-12,
                params={**base, "tau": float(tau)},
            )
        )
    s_values = default_s_grid(n) if s_values is None else s_values
    for s in s_values:
        vol, below, integ = terms(float(s))
        p = {**base, "s": float(s)}
        out.append(BoundCheck("philessthans0", vol, float(philessthans0_rhs(s, n, m)), strict=True, params=p))
        out.append(BoundCheck("philessthans", integ, float(philessthans_rhs(s, n, m)), strict=True, params=p))
        out.append(BoundCheck("muphiss", below, float(muphiss_rhs(s, n)), tol=1e-12, params=p))
    return out


def closetomax_margin(n: int, taus=TAUS) -> list[tuple[float, float, float]]:
    """Ratio of the radial-exponential level volume to the lower bound.

    Returns ``(tau, ratio, limit)`` for ``tau < 1/n``, where the family is
    known to sit within ``limit = e (1 + 1/n!)`` of the bound.
    """
    phi = RadialExp.probability(n)
    limit = math.e * (1 + 1 / math.factorial(n))
    rows = []
    for tau in taus:
        if tau >= 1 / n:
            continue
        vol = float(phi.level_volume((1 - tau) * phi.max))
        rows.append((float(tau), vol / float(closetomax_rhs(tau, n, phi.max)), limit))
    return rows


def bounded_levels_check(f: LogConcaveFunction, count: int = 32) -> bool:
    """Every ``{f >= t}`` for ``t`` in ``(0, M)`` is a bounded interval of positive length."""
    m = float(np.exp(-f.potential.min()))
    if integrate(f) <= 0:
        return False
    for t in np.geomspace(1e-12 * m, m * (1 - 1e-9), count):
        iv = superlevel_set(f, t)
        if iv is None or not (np.isfinite(iv.a) and np.isfinite(iv.b)) or iv.length <= 0:
            return False
    return True
