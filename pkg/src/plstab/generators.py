"""Seeded generators of random log-concave test functions and convex polygons."""

from __future__ import annotations

import numpy as np

from .bodies import Polygon
from .core.analytic import Exponential, Gaussian, Laplace, Uniform
from .core.functions import PotentialGrid

FAMILIES = ("gaussian", "uniform", "exponential", "laplace", "piecewise")


def random_potential(rng: np.random.Generator, n_nodes: int = 512) -> PotentialGrid:
    """Random convex piecewise-linear potential with a handful of kinks.

    Slopes increase through randomly placed breakpoints, so the potential
    is convex by construction; it is shifted to a random height.
    """
    lo = rng.uniform(-5, 0)
    hi = lo + rng.uniform(1, 8)
    x = np.linspace(lo, hi, n_nodes)
    k = int(rng.integers(1, 6))
    kinks = np.sort(rng.uniform(lo, hi, k))
    jumps = rng.exponential(2.0, k)
    s0 = rng.uniform(-3, 0)
    u = s0 * (x - lo) + sum(j * np.maximum(x - t, 0.0) for j, t in zip(jumps, kinks))
    u += rng.uniform(0, 0.5) * (x - 0.5 * (lo + hi)) ** 2
    u -= u.min() + rng.uniform(-1, 1)
    return PotentialGrid(float(lo), float(hi), u)


def random_log_concave(rng: np.random.Generator, n_nodes: int = 512, family: str | None = None) -> PotentialGrid:
    """One random log-concave grid from one of :data:`FAMILIES`."""
    family = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
    if family == "gaussian":
        d = Gaussian(rng.uniform(-3, 3), rng.uniform(0.3, 3))
    elif family == "uniform":
        a = rng.uniform(-3, 3)
        d = Uniform(a, a + rng.uniform(0.2, 4))
    elif family == "exponential":
        d = Exponential(rng.uniform(0.3, 3))
    elif family == "laplace":
        d = Laplace(rng.uniform(-3, 3), rng.uniform(0.3, 2))
    else:
        return random_potential(rng, n_nodes)
    g = d.to_grid(n_nodes)
    # random mass so that non-normalised inputs are exercised too
    return PotentialGrid(g.x_lo, g.x_hi, g.u - np.log(rng.uniform(0.2, 5)))


def random_polygon(rng: np.random.Generator, max_vertices: int = 12) -> Polygon:
    """Convex hull of random points in a random box (at least a triangle)."""
    while True:
        k = int(rng.integers(3, max_vertices + 1))
        pts = rng.normal(size=(k, 2)) * rng.uniform(0.3, 3, size=2) + rng.uniform(-5, 5, size=2)
        try:
            return Polygon.from_points(pts)
        except ValueError:
            continue
