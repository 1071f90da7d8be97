"""Deficits, translative distances, witness shifts and the stability bounds.

The deficit of a pair is ``eps = int h / ((int f)^(1-lam) (int g)^lam) - 1``
with ``h`` the exact sup-convolution. Stability statements bound how far
``f`` and ``g`` are from scaled translates of each other, measured in
``L1`` after an optimal shift; here those shifts are found numerically
and the bounds evaluated with explicit (configurable) constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .core.analytic import Gaussian, Laplace, Uniform
from .core.checks import BoundCheck
from .core.constants import Constants
from .core.functions import (
    LogConcaveFunction,
    cell_integrals,
    integrate,
    max_point,
    moments,
)
from .core.hull import log_concave_hull
from .errors import (
    ConfigInvalid,
    DomainViolation,
    EpsilonOutOfRange,
    HypothesisNotMet,
    HypothesisViolated,
    OmegaNotBelowOne,
    ValidationError,
)
from .legendre import _check_weights, multi_sup_convolution_exact, sup_convolution_exact

SWEEP_FAMILIES = ("gaussian-shift-mix", "gaussian-scale", "uniform-width", "laplace-scale")
SWEEP_HEADER = (
    "family",
    "param",
    "lambda",
    "mass_f",
    "mass_g",
    "mass_h",
    "epsilon",
    "l1",
    "v_star",
    "w",
    "residual_f",
    "residual_g",
    "bound19",
)
FIT_WINDOW = (1e-3, 1e-1)


# --- exact L1 distances -------------------------------------------------------


def _l1_pieces(xa, ua, xb, ub):
    """``int |exp(-ua) - exp(-ub)|`` for two piecewise-linear potentials.

    Each function is zero outside its own knot range. On every cell of the
    merged knot set both densities are log-linear, so their difference
    changes sign at most once; cells are split there and integrated exactly.
    """
    knots = np.union1d(xa, xb)
    left, right = knots[:-1], knots[1:]
    mid = 0.5 * (left + right)
    ina = (mid > xa[0]) & (mid < xa[-1])
    inb = (mid > xb[0]) & (mid < xb[-1])
    with np.errstate(invalid="ignore"):
        al = np.where(ina, np.interp(left, xa, ua), np.inf)
        ar = np.where(ina, np.interp(right, xa, ua), np.inf)
        bl = np.where(inb, np.interp(left, xb, ub), np.inf)
        br = np.where(inb, np.interp(right, xb, ub), np.inf)
    width = right - left
    both = ina & inb
    total = 0.0
    # cells where only one function lives
    total += float(cell_integrals(width[ina & ~inb], al[ina & ~inb], ar[ina & ~inb]).sum())
    total += float(cell_integrals(width[inb & ~ina], bl[inb & ~ina], br[inb & ~ina]).sum())
    if not np.any(both):
        return total
    w, al, ar, bl, br = width[both], al[both], ar[both], bl[both], br[both]
    dl, dr = bl - al, br - ar  # sign of f_a - f_b
    cross = dl * dr < 0
    frac = np.where(cross, dl / np.where(cross, dl - dr, 1.0), 1.0)
    am = al + frac * (ar - al)
    bm = bl + frac * (br - bl)
    # first sub-cell [left, left + frac w], second [.., right] (empty when no crossing)
    w1, w2 = frac * w, (1 - frac) * w
    p1 = cell_integrals(w1, al, am) - cell_integrals(w1, bl, bm)
    p2 = cell_integrals(w2, am, ar) - cell_integrals(w2, bm, br)
    return total + float(np.abs(p1).sum() + np.abs(p2).sum())


def shifted_l1(a: LogConcaveFunction, ca: float, shift: float, b: LogConcaveFunction, cb: float) -> float:
    """``int |ca a(x - shift) - cb b(x)| dx``, exact."""
    return _l1_pieces(a.knots + shift, a.potential - math.log(ca), b.knots, b.potential - math.log(cb))


def l1_distance(f: LogConcaveFunction, g: LogConcaveFunction) -> float:
    """``int |f - g|``, exact for piecewise log-linear functions."""
    return _l1_pieces(f.knots, f.potential, g.knots, g.potential)


def _approx_shift_l1(a, ca, b, cb, shifts, n_eval=2048):
    """Trapezoid approximation of ``int |ca a(x - s) - cb b(x)|`` for many ``s``."""
    lo = min(b.knots[0], a.knots[0] + shifts.min())
    hi = max(b.knots[-1], a.knots[-1] + shifts.max())
    x = np.linspace(lo, hi, n_eval)
    bx = cb * b(x)
    out = np.empty(len(shifts))
    for start in range(0, len(shifts), 256):
        s = shifts[start : start + 256]
        ax = ca * np.exp(-np.interp(x[None, :] - s[:, None], a.knots, a.potential, left=np.inf, right=np.inf))
        out[start : start + 256] = np.trapezoid(np.abs(ax - bx[None, :]), x, axis=1)
    return out


def _search_shift(exact, approx, center, half_width, step, n_keep=4, xtol=1e-10):
    """Global 1-D minimisation: approximate scan, exact re-ranking, Brent refinement.

    Returns ``(argmin, min)``; ties prefer the smaller ``|shift|``.
    """
    n = int(min(1025, max(33, math.ceil(2 * half_width / step) + 1)))
    grid = np.linspace(center - half_width, center + half_width, n)
    h = grid[1] - grid[0]
    vals = approx(grid)
    order = np.argsort(vals, kind="stable")
    best_v, best_x = math.inf, 0.0
    for i in order[:n_keep]:
        c = grid[i]
        res = minimize_scalar(exact, bounds=(c - h, c + h), method="bounded", options={"xatol": xtol})
        for x, v in ((float(res.x), float(res.fun)), (float(c), float(exact(c)))):
            if v < best_v - 1e-13 or (v <= best_v + 1e-13 and abs(x) < abs(best_x)):
                best_v, best_x = v, x
    return best_x, best_v


def translative_l1(f: LogConcaveFunction, g: LogConcaveFunction) -> tuple[float, float]:
    """``min_v int |f~(x - v) - g~(x)| dx`` for the normalised densities.

    Returns ``(distance, v_star)`` with distance in ``[0, 2]``. The scan
    covers the mean difference ``+- 4`` times the sum of standard
    deviations at the finer of the two knot spacings; the best candidates
    are refined to ``1e-9`` in ``v``. Only the objective value is
    guaranteed, not uniqueness of the minimiser.
    """
    mf, mg = integrate(f), integrate(g)
    (ef, sf), (eg, sg) = moments(f), moments(g)
    step = min(np.diff(f.knots).min(), np.diff(g.knots).min())
    cf, cg = 1 / mf, 1 / mg

    def exact(v):
        return shifted_l1(f, cf, v, g, cg)

    def approx(vs):
        return _approx_shift_l1(f, cf, g, cg, vs)

    v, d = _search_shift(exact, approx, eg - ef, 4 * (sf + sg), step)
    # the search must never do worse than the unshifted comparison
    d0 = exact(0.0)
    if d0 <= d:
        v, d = 0.0, d0
    return float(min(max(d, 0.0), 2.0)), float(v)


# --- deficit and witness ------------------------------------------------------


@dataclass
class DeficitReport:
    """Deficit of a pair and, once a witness is recovered, the stability residuals.

    ``residual_f`` and ``residual_g`` are divided by ``mass_f`` and ``mass_g``.
    """

    lam: float
    mass_f: float
    mass_g: float
    mass_h: float
    epsilon: float
    a_ratio: float
    witness_w: float = math.nan
    residual_f: float = math.nan
    residual_g: float = math.nan
    bound_thm15: float = math.nan
    omega_eps: float = math.nan
    satisfied: dict = field(default_factory=dict)

    def as_lines(self) -> list[str]:
        keys = (
            ("lambda", self.lam),
            ("mass_f", self.mass_f),
            ("mass_g", self.mass_g),
            ("mass_h", self.mass_h),
            ("epsilon", self.epsilon),
            ("a_ratio", self.a_ratio),
            ("witness_w", self.witness_w),
            ("residual_f", self.residual_f),
            ("residual_g", self.residual_g),
            ("bound_thm15", self.bound_thm15),
            ("omega_eps", self.omega_eps),
        )
        # values below 1e-12 are rounding noise and print as zero
        lines = [f"{k}={v:.6f}" if abs(v) >= 1e-3 or abs(v) < 1e-12 or not math.isfinite(v) else f"{k}={v:.6e}" for k, v in keys]
        lines += [f"satisfied_{k}={str(v).lower()}" for k, v in self.satisfied.items()]
        return lines


def deficit(mass_f: float, mass_g: float, mass_h: float, lam: float) -> float:
    return mass_h / (mass_f ** (1 - lam) * mass_g**lam) - 1.0


def pl_deficit(f: LogConcaveFunction, g: LogConcaveFunction, lam: float, h=None) -> DeficitReport:
    """Masses and deficit for ``h = h_lam``; the witness fields stay unset."""
    h = sup_convolution_exact(f, g, lam) if h is None else h
    mf, mg, mh = integrate(f), integrate(g), integrate(h)
    eps = deficit(mf, mg, mh, lam)
    rep = DeficitReport(lam, mf, mg, mh, eps, mg / mf)
    rep.satisfied["pl"] = eps >= -1e-9
    return rep


def check_pl_hypothesis(f, g, h, lam, n_pairs: int = 256, tol: float = 1e-9, seed: int = 0) -> float:
    """Worst violation of ``h((1-lam)x + lam y) >= f(x)^(1-lam) g(y)^lam`` on sampled pairs.

    Pairs mix knots of both functions with uniform random points of the
    supports; the comparison is on potentials, relative to their scale.
    Raises :class:`HypothesisViolated` beyond ``tol``.
    """
    rng = np.random.default_rng(seed)
    xs = np.concatenate((rng.choice(f.knots, n_pairs), rng.uniform(f.knots[0], f.knots[-1], n_pairs)))
    ys = np.concatenate((rng.choice(g.knots, n_pairs), rng.uniform(g.knots[0], g.knots[-1], n_pairs)))
    rng.shuffle(ys)
    z = (1 - lam) * xs + lam * ys
    rhs = (1 - lam) * f.potential_at(xs) + lam * g.potential_at(ys)
    lhs = h.potential_at(z)
    scale = np.maximum(1.0, np.abs(rhs))
    worst = float(np.max((lhs - rhs) / scale))
    if worst > tol:
        raise HypothesisViolated(f"h falls below the geometric mean by {worst:.3e} (relative potential)")
    return worst


def omega(eps: float, consts: Constants = Constants()) -> float:
    """``c0 eps^(1/3) |ln eps|^(4/3)``."""
    if not (0.0 < eps < 1.0):
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {eps}")
    return consts.c0_1d * eps ** (1 / 3) * abs(math.log(eps)) ** (4 / 3)


def xi_from_omega(om: float) -> float:
    if not (0.0 < om < 1.0):
        raise OmegaNotBelowOne(f"omega must lie in (0, 1), got {om}")
    return om ** (1 / 6) / abs(math.log(om)) ** 0.5


def xi(eps: float, consts: Constants = Constants()) -> float:
    """``omega^(1/6) / |ln omega|^(1/2)`` with ``omega = omega(eps)``."""
    return xi_from_omega(omega(eps, consts))


def xi_guards(x: float, n: int) -> dict:
    """The two smallness conditions on ``xi`` used with the lifted bodies."""
    return {
        "xi_below_threshold": x < math.exp(-4 * (n - 1)) / 2,
        "tail_small": 6 * math.e * x * abs(math.log(x)) ** n < 0.5,
    }


def bound_thm15(eps: float, tau: float, n: int = 1, consts: Constants = Constants()) -> float:
    """``c^n n^n (eps / tau)^(1/19)``, relative to the mass."""
    if eps <= 0:
        return 0.0
    return consts.c_thm15**n * n**n * (eps / tau) ** (1 / 19)


def bound_cor16(l1: float, tau: float, n: int = 1, consts: Constants = Constants()) -> float:
    """``gamma tau l1^19`` with ``gamma = c^n / n^(19 n)``."""
    if not (0.0 <= l1 <= 2.0 + 1e-12):
        raise ValidationError(f"l1 must lie in [0, 2], got {l1}")
    if not (0.0 < tau <= 0.5):
        raise ValidationError(f"tau must lie in (0, 1/2], got {tau}")
    return consts.c_cor16**n / n ** (19 * n) * tau * l1**19


def bound_thm17(eps: float, tau: float, m: int, n: int = 1, consts: Constants = Constants()) -> float:
    """``c^n n^n m^5 (eps / (m tau))^(1/19)``, relative to each mass."""
    if m < 2:
        raise ValidationError("need m >= 2")
    if not (0.0 < tau <= 1.0 / m + 1e-15):
        raise ValidationError(f"tau must lie in (0, 1/m], got {tau}")
    if eps <= 0:
        return 0.0
    return consts.c_thm17**n * n**n * m**5 * (eps / (m * tau)) ** (1 / 19)


def _omega_or_nan(eps, consts):
    if eps <= 0:
        return 0.0
    try:
        return omega(eps, consts)
    except EpsilonOutOfRange:
        return math.nan


def _spread(f):
    return f.knots[-1] - f.knots[0]


def recover_witness(
    f: LogConcaveFunction,
    g: LogConcaveFunction,
    h: LogConcaveFunction | None,
    lam: float,
    consts: Constants = Constants(),
    check_hypothesis: bool = True,
) -> DeficitReport:
    """Complete deficit report with the witness shift ``w``.

    With ``a = int g / int f``, ``w`` minimises
    ``int |f(x) - a^-lam h(x - lam w)| + int |g(x) - a^(1-lam) h(x + (1-lam) w)|``.
    For ``g(x) = a f(x - z)`` this gives ``w = -z``. ``h`` defaults to the
    exact sup-convolution; a supplied ``h`` is spot-checked against the
    hypothesis ``h((1-lam)x + lam y) >= f(x)^(1-lam) g(y)^lam``.
    """
    if h is None:
        h = sup_convolution_exact(f, g, lam)
    elif check_hypothesis:
        check_pl_hypothesis(f, g, h, lam)
    rep = pl_deficit(f, g, lam, h)
    a = rep.a_ratio
    ca, cb = a ** (-lam), a ** (1 - lam)

    def exact(w):
        return shifted_l1(h, ca, lam * w, f, 1.0) + shifted_l1(h, cb, -(1 - lam) * w, g, 1.0)

    def approx(ws):
        return _approx_shift_l1(h, ca, f, 1.0, lam * ws) + _approx_shift_l1(h, cb, g, 1.0, -(1 - lam) * ws)

    (ef, sf), (eg, sg) = moments(f), moments(g)
    step = min(np.diff(f.knots).min(), np.diff(g.knots).min())
    half = 0.5 * (_spread(f) + _spread(g))
    half = min(half, 8 * (sf + sg) + abs(eg - ef))
    w, _ = _search_shift(exact, approx, ef - eg, half, step)
    rep.witness_w = float(w)
    rep.residual_f = shifted_l1(h, ca, lam * w, f, 1.0) / rep.mass_f
    rep.residual_g = shifted_l1(h, cb, -(1 - lam) * w, g, 1.0) / rep.mass_g
    tau = min(lam, 1 - lam)
    rep.bound_thm15 = bound_thm15(max(rep.epsilon, 0.0), tau, 1, consts)
    rep.omega_eps = _omega_or_nan(rep.epsilon, consts)
    rep.satisfied["thm15"] = max(rep.residual_f, rep.residual_g) <= rep.bound_thm15 + 1e-9
    return rep


# --- several functions --------------------------------------------------------


@dataclass
class MultiDeficitReport:
    lams: np.ndarray
    masses: np.ndarray
    mass_h: float
    epsilon: float
    a: np.ndarray
    w: np.ndarray
    residuals: np.ndarray
    bound: float
    tau: float

    @property
    def gauge(self) -> float:
        return float(np.dot(self.lams, self.w))

    @property
    def satisfied(self) -> bool:
        return bool(np.all(self.residuals <= self.bound + 1e-9))


def multi_deficit(fs: Sequence[LogConcaveFunction], lams, consts: Constants = Constants()) -> MultiDeficitReport:
    """Deficit, scale factors and gauge-fixed witnesses for ``m`` functions.

    ``a_i = (int f_i)^(1-lam_i) / prod_{j != i} (int f_j)^lam_j``; each
    ``w_i`` aligns ``f_i`` with ``a_i h(x + w_i)`` and the family is then
    shifted so that ``sum lam_i w_i = 0``. Shifting all ``w_i`` together
    only translates ``h``, so the residuals refer to the aligned shifts.
    """
    lams = _check_weights(lams)
    if len(fs) != len(lams):
        raise ValidationError("need one weight per function")
    h = multi_sup_convolution_exact(fs, lams)
    masses = np.array([integrate(f) for f in fs])
    mh = integrate(h)
    if len(fs) == 2:
        # same expression as the two-function path, so m = 2 agrees bitwise
        eps = deficit(masses[0], masses[1], mh, float(lams[1]))
    else:
        eps = mh / float(np.prod(masses**lams)) - 1.0
    logm = np.log(masses)
    a = np.exp((1 - lams) * logm - (np.dot(lams, logm) - lams * logm))
    (eh, sh) = moments(h)
    w = np.empty(len(fs))
    for i, f in enumerate(fs):
        ef, sf = moments(f)
        step = min(np.diff(f.knots).min(), np.diff(h.knots).min())

        def exact(s, f=f, ai=a[i]):
            return shifted_l1(h, ai, -s, f, 1.0)

        def approx(ss, f=f, ai=a[i]):
            return _approx_shift_l1(h, ai, f, 1.0, -ss)

        w[i], _ = _search_shift(exact, approx, eh - ef, 4 * (sf + sh), step)
    res = np.array([shifted_l1(h, a[i], -w[i], f, 1.0) / masses[i] for i, f in enumerate(fs)])
    # re-centring is a translation of h, which leaves the residuals unchanged
    w = w - np.dot(lams, w)
    w = w - np.dot(lams, w)
    tau = float(min(lams.min(), 1.0 / len(fs)))
    bound = bound_thm17(max(eps, 0.0), tau, len(fs), 1, consts)
    return MultiDeficitReport(lams, masses, mh, eps, a, w, res, bound, tau)


# --- level sets and profile checks -------------------------------------------


@dataclass
class InclusionReport:
    checks: list[BoundCheck]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def violations(self) -> int:
        return sum(not c.holds for c in self.checks)


def _levels(f, count):
    m = float(np.exp(-f.potential.min()))
    return np.geomspace(1e-6 * m, m, count)


def verify_level_inclusion(
    f: LogConcaveFunction,
    g: LogConcaveFunction,
    lam: float = 0.5,
    sample_levels: int | tuple = 10,
    h: LogConcaveFunction | None = None,
    tol: float = 1e-9,
) -> InclusionReport:
    """Level-set inclusion ``(1-lam) Phi_r + lam Psi_s ⊆ Omega_{r^(1-lam) s^lam}``.

    Also records ``H(r^(1-lam) s^lam) >= (1-lam) F(r) + lam G(s)`` (the
    1-D volume form; at ``lam = 1/2`` it is ``((F^(1/n) + G^(1/n))/2)^n``
    with ``n = 1``) and the weaker ``>= F(r)^(1-lam) G(s)^lam``.
    ``sample_levels`` is a count per function (geometric in
    ``[1e-6 M, M]``) or an explicit ``(r_values, s_values)`` pair.
    """
    from .core.functions import superlevel_set  # noqa: PLC0415

    h = sup_convolution_exact(f, g, lam) if h is None else h
    if isinstance(sample_levels, int):
        rs, ss = _levels(f, sample_levels), _levels(g, sample_levels)
    else:
        rs, ss = map(np.asarray, sample_levels)
    _, h_max = max_point(h)
    checks = []
    for r in rs:
        Pr = superlevel_set(f, r)
        for s in ss:
            Qs = superlevel_set(g, s)
            if Pr is None or Qs is None:
                continue
            t = r ** (1 - lam) * s**lam
            # the top level of h matches M_f^(1-lam) M_g^lam only up to rounding
            if h_max < t <= h_max * (1 + tol):
                t = h_max
            Om = superlevel_set(h, t)
            lo = (1 - lam) * Pr.a + lam * Qs.a
            hi = (1 - lam) * Pr.b + lam * Qs.b
            p = {"r": float(r), "s": float(s)}
            span = max(1.0, abs(lo), abs(hi))
            if Om is None:
                checks.append(BoundCheck("inclusion", 1.0, 0.0, params=p))
                continue
            # containment as two one-sided checks on the endpoints
            checks.append(BoundCheck("inclusion_left", Om.a, lo, tol=tol * span, params=p))
            checks.append(BoundCheck("inclusion_right", Om.b, hi, sense=">=", tol=tol * span, params=p))
            vol_h = Om.length
            checks.append(
                BoundCheck("minksum", vol_h, (1 - lam) * Pr.length + lam * Qs.length, sense=">=", tol=tol * span, params=p)
            )
            checks.append(
                BoundCheck(
                    "minksum_geometric",
                    vol_h,
                    Pr.length ** (1 - lam) * Qs.length**lam,
                    sense=">=",
                    tol=tol * span,
                    params=p,
                )
            )
    return InclusionReport(checks)


@dataclass(frozen=True)
class Lemma73Report:
    eta: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-12)


def verify_lemma73(phi0: float, phi_lam: float, phi_half: float, phi1: float, lam: float, eta: float | None = None) -> Lemma73Report:
    """Check ``phi(1/2) <= (1 + eta / min(lam, 1-lam)) sqrt(phi(0) phi(1))``.

    The hypothesis is ``phi(lam) <= (1 + eta) phi(0)^(1-lam) phi(1)^lam``
    with ``0 <= eta < 2 min(lam, 1-lam)``; when ``eta`` is omitted the
    smallest admissible value is used. :class:`HypothesisNotMet` is raised
    if the hypothesis or the range of ``eta`` fails.
    """
    if not (0 < lam < 1):
        raise ValidationError("lambda must lie in (0, 1)")
    mn = min(lam, 1 - lam)
    base = phi0 ** (1 - lam) * phi1**lam
    if eta is None:
        eta = max(phi_lam / base - 1.0, 0.0)
    if not (0 <= eta < 2 * mn):
        raise HypothesisNotMet(f"eta = {eta:.6g} outside [0, {2 * mn:.6g})")
    if phi_lam > (1 + eta) * base * (1 + 1e-12):
        raise HypothesisNotMet("phi(lambda) exceeds (1 + eta) phi(0)^(1-lambda) phi(1)^lambda")
    return Lemma73Report(float(eta), float(phi_half), float((1 + eta / mn) * math.sqrt(phi0 * phi1)))


def verify_lemma81(rho: float, t: float, n: int) -> float:
    """Slack of ``(ln t)^n <= (n rho / e)^n t^(1/rho)``; equality at ``t = e^(n rho)``."""
    if not (rho > 0 and t > 1 and n >= 2):
        raise DomainViolation(f"need rho > 0, t > 1, n >= 2; got rho={rho}, t={t}, n={n}")
    return (n * rho / math.e) ** n * t ** (1 / rho) - math.log(t) ** n


# --- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    family: str
    param: float
    lam: float
    mass_f: float
    mass_g: float
    mass_h: float
    epsilon: float
    l1: float
    v_star: float
    w: float
    residual_f: float
    residual_g: float
    bound19: float

    def row(self) -> list[str]:
        vals = [
            self.param,
            self.lam,
            self.mass_f,
            self.mass_g,
            self.mass_h,
            self.epsilon,
            self.l1,
            self.v_star,
            self.w,
            self.residual_f,
            self.residual_g,
            self.bound19,
        ]
        return [self.family] + [f"{v:.17g}" for v in vals]


def sweep_pair(family: str, param: float, n_nodes: int = 4097) -> tuple[LogConcaveFunction, LogConcaveFunction]:
    """The pair ``(f, g)`` of a one-parameter family; ``param`` at its identity value gives ``f = g``.

    * ``gaussian-scale``: N(0, 1) against N(0, param^2);
    * ``gaussian-shift-mix``: N(0, 1) against the log-concave hull of the
      equal mixture of N(0, 1) and N(param, 1);
    * ``uniform-width``: U[0, 1] against U[0, param];
    * ``laplace-scale``: Laplace(0, 1) against Laplace(0, param).
    """
    if family not in SWEEP_FAMILIES:
        raise ConfigInvalid(f"unknown sweep family {family!r}; choose from {', '.join(SWEEP_FAMILIES)}")
    if not np.isfinite(param):
        raise ConfigInvalid("sweep parameter must be finite")
    if family == "gaussian-shift-mix":
        f = Gaussian(0.0, 1.0)
        lo, hi = f.window()
        x = np.linspace(lo, hi + abs(param), n_nodes) if param >= 0 else np.linspace(lo - abs(param), hi, n_nodes)
        mix = 0.5 * f(x) + 0.5 * Gaussian(param, 1.0)(x)
        return f.to_grid(n_nodes), log_concave_hull(x, mix)
    if param <= 0:
        raise ConfigInvalid(f"{family} needs a positive parameter, got {param}")
    if family == "gaussian-scale":
        return Gaussian(0, 1).to_grid(n_nodes), Gaussian(0, param).to_grid(n_nodes)
    if family == "uniform-width":
        return Uniform(0, 1).to_grid(n_nodes), Uniform(0, param).to_grid(n_nodes)
    return Laplace(0, 1).to_grid(n_nodes), Laplace(0, param).to_grid(n_nodes)


def sweep_record(
    family: str,
    param: float,
    lam: float = 0.5,
    n_nodes: int = 4097,
    eps_nodes: int = 65537,
    consts: Constants = Constants(),
) -> SweepRecord:
    """One sweep row.

    Masses and the deficit come from a fine grid (``eps_nodes``): the grid
    bias of ``eps`` is ``O(dx^2)`` and must stay well below ``eps`` itself
    near the identity. Distances and the witness use ``n_nodes``.
    """
    f, g = sweep_pair(family, param, n_nodes)
    rep = recover_witness(f, g, None, lam, consts)
    fine = pl_deficit(*sweep_pair(family, param, eps_nodes), lam)
    l1, v = translative_l1(f, g)
    tau = min(lam, 1 - lam)
    return SweepRecord(
        family,
        float(param),
        float(lam),
        fine.mass_f,
        fine.mass_g,
        fine.mass_h,
        fine.epsilon,
        l1,
        v,
        rep.witness_w,
        rep.residual_f,
        rep.residual_g,
        bound_cor16(min(l1, 2.0), tau, 1, consts),
    )


def deficit_vs_distance_sweep(
    family: str,
    params: Sequence[float],
    lam: float = 0.5,
    n_nodes: int = 4097,
    eps_nodes: int = 65537,
    consts: Constants = Constants(),
) -> list[SweepRecord]:
    """One record per parameter, in the given order."""
    if len(params) == 0:
        raise ConfigInvalid("empty parameter grid")
    if not (0 < lam < 1):
        raise ConfigInvalid(f"lambda must lie in (0, 1), got {lam}")
    return [sweep_record(family, float(p), lam, n_nodes, eps_nodes, consts) for p in params]


def fit_exponent(records: Sequence[SweepRecord], window=FIT_WINDOW) -> tuple[float, int]:
    """Least-squares slope of ``ln eps`` against ``ln l1`` for ``l1`` in ``window``.

    Returns ``(slope, n_used)``; the slope is ``nan`` with fewer than two points.
    """
    pts = [(r.l1, r.epsilon) for r in records if window[0] <= r.l1 <= window[1] and r.epsilon > 0]
    if len(pts) < 2:
        return math.nan, len(pts)
    x, y = np.log(np.array(pts)).T
    slope = np.polyfit(x, y, 1)[0]
    return float(slope), len(pts)


def gaussian_scale_epsilon(sigma: float) -> float:
    """Closed-form deficit of N(0,1) and N(0, sigma^2) at ``lam = 1/2``."""
    return math.sqrt((1 + sigma**2) / (2 * sigma)) - 1.0


def max_ratio_check(f: LogConcaveFunction, g: LogConcaveFunction, h: LogConcaveFunction) -> tuple[float, float]:
    """``(M_f / M_g, M_f / M_h)`` after normalising every mass to one."""

    def m(p):
        return float(np.exp(-p.potential.min())) / integrate(p)

    return m(f) / m(g), m(f) / m(h)
