"""The lemma-verification battery behind ``plstab verify``.

Every row is a :class:`BoundCheck`; ``hard`` rows decide the exit status,
the rest (near-optimality margins, bounds with unknown constants) are
reported only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core.analytic import Exponential, Gaussian, Laplace, RadialExp, Uniform
from .core.checks import BoundCheck
from .core.functions import PotentialGrid, max_point, translate_scale
from .core.levels import closetomax_margin, level_bound_checks
from .errors import HypothesisNotMet
from .generators import random_log_concave, random_potential
from .geometry import lift_area, lift_body, minkowski_combine
from .legendre import lambda_mass_profile, sup_convolution_exact
from .stability import verify_lemma73, verify_lemma81, verify_level_inclusion, xi


@dataclass(frozen=True)
class BatteryRow:
    group: str
    check: BoundCheck
    hard: bool = True

    @property
    def passed(self) -> bool:
        return self.check.holds or not self.hard

    def line(self) -> str:
        tag = "" if self.hard else " (report)"
        return f"[{self.group}]{tag} {self.check.describe()}"


def unit_max(f: PotentialGrid) -> PotentialGrid:
    """Rescale so that ``max f = 1``."""
    _, m = max_point(f)
    return translate_scale(f, 1.0 / m, 0.0)


def level_test_densities(rng: np.random.Generator, resolution: int, n_random: int = 4):
    """Named 1-D densities for the level-set bounds."""
    out = [
        ("gaussian", Gaussian(0, 1).to_grid(resolution)),
        ("uniform", Uniform(0, 1).to_grid(resolution)),
        ("exponential", Exponential(1).to_grid(resolution)),
        ("laplace", Laplace(0, 1).to_grid(resolution)),
    ]
    out += [(f"random{i}", random_potential(rng, resolution)) for i in range(n_random)]
    return out


def pair_matrix(rng: np.random.Generator, resolution: int, count: int = 10):
    """Deterministic pairs: a few fixed families followed by random draws."""
    fixed = [
        (Gaussian(0, 1).to_grid(resolution), Gaussian(1, 2).to_grid(resolution)),
        (Uniform(0, 1).to_grid(resolution), Uniform(-1, 2).to_grid(resolution)),
        (Laplace(0, 1).to_grid(resolution), Exponential(2).to_grid(resolution)),
    ]
    while len(fixed) < count:
        fixed.append((random_log_concave(rng, resolution), random_log_concave(rng, resolution)))
    return fixed[:count]


ORACLE_LAMBDAS = (0.1, 0.25, 0.5, 0.75, 0.9)


def oracle_matrix(resolution: int = 512):
    """The 20 ``(label, f, g, lam)`` cases: four family pairs at five weights."""
    pairs = [
        ("gaussian", Gaussian(0, 1), Gaussian(1, 2)),
        ("uniform", Uniform(0, 1), Uniform(-1, 2)),
        ("laplace", Laplace(0, 1), Laplace(1, 0.5)),
        ("exponential", Exponential(1), Exponential(3)),
    ]
    return [
        (f"{name} lam={lam}", f.to_grid(resolution), g.to_grid(resolution), lam)
        for name, f, g in pairs
        for lam in ORACLE_LAMBDAS
    ]


def section4_rows(rng, resolution: int) -> list[BatteryRow]:
    rows = []
    for name, f in level_test_densities(rng, resolution):
        rows += [BatteryRow("levels", c) for c in level_bound_checks(f, label=name)]
    for n in range(1, 7):
        rows += [BatteryRow("levels", c) for c in level_bound_checks(RadialExp.probability(n))]
        for tau, ratio, limit in closetomax_margin(n):
            rows.append(
                BatteryRow(
                    "levels-margin",
                    BoundCheck("closetomax_margin", ratio, limit, params={"n": n, "tau": tau}),
                    hard=False,
                )
            )
    return rows


def inclusion_rows(pairs) -> list[BatteryRow]:
    rows = []
    for k, (f, g) in enumerate(pairs):
        rep = verify_level_inclusion(f, g, 0.5, 10)
        worst = min(rep.checks, key=lambda c: c.slack)
        ok = BoundCheck(
            "level_inclusion",
            float(rep.violations),
            0.0,
            params={"pair": k, "checks": len(rep.checks), "worst_slack": worst.slack},
        )
        rows.append(BatteryRow("inclusion", ok))
    return rows


def lemma73_rows(pairs) -> list[BatteryRow]:
    rows = []
    for k, (f, g) in enumerate(pairs[:5]):
        for lam in (0.2, 0.3, 0.4):
            prof = dict(lambda_mass_profile(f, g, [lam, 0.5], check=False))
            try:
                rep = verify_lemma73(prof[0.0], prof[lam], prof[0.5], prof[1.0], lam)
            except HypothesisNotMet as exc:
                rows.append(
                    BatteryRow("lemma73", BoundCheck("lemma73_not_applicable", 0, 0, params={"pair": k, "lam": lam, "why": str(exc)}), hard=False)
                )
                continue
            rows.append(BatteryRow("lemma73", BoundCheck("lemma73", rep.lhs, rep.rhs, tol=1e-12 * rep.rhs, params={"pair": k, "lam": lam, "eta": rep.eta})))
    return rows


def lemma81_rows() -> list[BatteryRow]:
    rows = []
    for n in range(2, 7):
        for rho in (0.5, 1.0, 2.0):
            for t in (1.001, 2.0, math.exp(n * rho), 1e3, 1e8):
                rhs = (n * rho / math.e) ** n * t ** (1 / rho)
                slack = verify_lemma81(rho, t, n)
                rows.append(
                    BatteryRow(
                        "lemma81",
                        BoundCheck("lemma81", rhs - slack, rhs, tol=1e-12 * rhs, params={"n": n, "rho": rho, "t": t}),
                    )
                )
    return rows


def lift_rows(pairs, eps: float = 1e-6) -> list[BatteryRow]:
    rows = []
    level = xi(eps)
    for k, (f, g) in enumerate(pairs):
        f, g = unit_max(f), unit_max(g)
        h = sup_convolution_exact(f, g, 0.5)
        K, C, L = lift_body(f, level), lift_body(g, level), lift_body(h, level)
        mid = minkowski_combine(K, C, 0.5, 0.5)
        inside = L.contains_points(mid.vertices, 1e-9)
        rows.append(BatteryRow("lift", BoundCheck("lift_inclusion", float((~inside).sum()), 0.0, params={"pair": k, "xi": level})))
        for name, body, fn in (("K", K, f), ("C", C, g), ("L", L, h)):
            ref = lift_area(fn, level)
            rows.append(
                BatteryRow(
                    "lift",
                    BoundCheck("lift_area", abs(body.area - ref), 1e-10 * ref, params={"pair": k, "body": name}),
                )
            )
    return rows


def run_battery(seed: int = 0, resolution: int = 1024) -> list[BatteryRow]:
    """All checks, deterministic for a given seed and resolution."""
    rng = np.random.default_rng(seed)
    pairs = pair_matrix(rng, resolution)
    rows = section4_rows(rng, resolution)
    rows += inclusion_rows(pairs)
    rows += lemma73_rows(pairs)
    rows += lemma81_rows()
    rows += lift_rows(pairs)
    return rows
