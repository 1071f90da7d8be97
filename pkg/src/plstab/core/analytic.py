"""Closed-form log-concave families.

Each family knows its mass, maximum and superlevel volumes exactly, and
can be materialised as a :class:`PotentialGrid` on a truncated window
where the potential stays within ``TRUNCATION`` of its minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, gammaln

from ..errors import LevelAboveMax, ValidationError
from .functions import PotentialGrid

TRUNCATION = 40.0


def kappa(n: int) -> float:
    """Volume of the unit Euclidean ball in ``R^n``."""
    return float(np.exp(0.5 * n * np.log(np.pi) - gammaln(0.5 * n + 1.0)))


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive and finite, got {value}")


def _finite(name, value):
    if not np.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")


class AnalyticDensity:
    """Base class: subclasses define ``dim``, ``mass``, ``max`` and level volumes."""

    dim = 1

    def potential(self, x):
        raise NotImplementedError

    def window(self) -> tuple[float, float]:
        raise NotImplementedError

    def level_volume(self, t):
        """Volume of ``{phi >= t}``; raises :class:`LevelAboveMax` above the max."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValidationError("levels must be positive")
        if np.any(t > self.max * (1 + 1e-12)):
            raise LevelAboveMax(f"level {float(np.max(t)):.6g} exceeds the maximum {self.max:.6g}")
        return self._level_volume(np.minimum(t, self.max))

    def _grid_nodes(self, n_nodes: int):
        lo, hi = self.window()
        return np.linspace(lo, hi, n_nodes)

    def to_grid(self, n_nodes: int = 4097) -> PotentialGrid:
        """Sample the potential on a uniform grid over the truncation window."""
        if self.dim != 1:
            raise ValidationError("only one-dimensional families can be gridded")
        x = self._grid_nodes(n_nodes)
        return PotentialGrid(float(x[0]), float(x[-1]), self.potential(x))

    def __call__(self, x):
        return np.exp(-self.potential(x))


@dataclass(frozen=True)
class Gaussian(AnalyticDensity):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)

    @property
    def mass(self) -> float:
        return 1.0

    @property
    def max(self) -> float:
        return 1.0 / (self.sigma * math.sqrt(2 * math.pi))

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * ((x - self.mu) / self.sigma) ** 2 + math.log(self.sigma * math.sqrt(2 * math.pi))

    def window(self):
        r = self.sigma * math.sqrt(2 * TRUNCATION)
        return self.mu - r, self.mu + r

    def _level_volume(self, t):
        return 2 * self.sigma * np.sqrt(2 * np.maximum(np.log(self.max / t), 0.0))


@dataclass(frozen=True)
class Uniform(AnalyticDensity):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        _finite("a", self.a)
        _finite("b", self.b)
        if not self.a < self.b:
            raise ValidationError(f"uniform needs a < b, got a={self.a}, b={self.b}")

    @property
    def mass(self) -> float:
        return 1.0

    @property
    def max(self) -> float:
        return 1.0 / (self.b - self.a)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.a) & (x <= self.b)
        return np.where(inside, math.log(self.b - self.a), np.inf)

    def window(self):
        return self.a, self.b

    def _level_volume(self, t):
        return np.full(np.shape(t), self.b - self.a)


@dataclass(frozen=True)
class Exponential(AnalyticDensity):
    rate: float = 1.0

    def __post_init__(self):
        _positive("rate", self.rate)

    @property
    def mass(self) -> float:
        return 1.0

    @property
    def max(self) -> float:
        return self.rate

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self.rate * x - math.log(self.rate), np.inf)

    def window(self):
        return 0.0, TRUNCATION / self.rate

    def _level_volume(self, t):
        return np.log(self.max / t) / self.rate


@dataclass(frozen=True)
class Laplace(AnalyticDensity):
    mu: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("scale", self.scale)

    @property
    def mass(self) -> float:
        return 1.0

    @property
    def max(self) -> float:
        return 0.5 / self.scale

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.abs(x - self.mu) / self.scale + math.log(2 * self.scale)

    def window(self):
        r = TRUNCATION * self.scale
        return self.mu - r, self.mu + r

    def _grid_nodes(self, n_nodes):
        # an odd node count puts the kink at mu on a node
        lo, hi = self.window()
        return np.linspace(lo, hi, n_nodes | 1)

    def _level_volume(self, t):
        return 2 * self.scale * np.log(self.max / t)


@dataclass(frozen=True)
class RadialExp(AnalyticDensity):
    """``phi(x) = height * exp(-rate * |x|)`` on ``R^n``; level sets are balls."""

    n: int = 1
    height: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"dimension n must be a positive integer, got {self.n}")
        _positive("height", self.height)
        _positive("rate", self.rate)

    @property
    def dim(self) -> int:
        return int(self.n)

    @classmethod
    def probability(cls, n: int, rate: float = 1.0) -> "RadialExp":
        """The member with unit mass: ``height = rate^n / (n! kappa_n)``."""
        return cls(n, rate**n / (math.factorial(n) * kappa(n)), rate)

    @property
    def mass(self) -> float:
        return self.height * kappa(self.n) * math.factorial(self.n) / self.rate**self.n

    @property
    def max(self) -> float:
        return self.height

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return self.rate * np.abs(x) - math.log(self.height)

    def window(self):
        r = TRUNCATION / self.rate
        return -r, r

    def _grid_nodes(self, n_nodes):
        lo, hi = self.window()
        return np.linspace(lo, hi, n_nodes | 1)

    def _level_volume(self, t):
        return kappa(self.n) * (np.log(self.max / t) / self.rate) ** self.n

    def mass_below(self, s):
        """``mu(phi < s * M)``: the mass outside the ball of radius ``|ln s| / rate``."""
        s = np.asarray(s, dtype=float)
        return self.mass * gammaincc(self.n, np.abs(np.log(s)))

    def level_integral(self, s):
        """``int_0^{sM} |{phi >= t}| dt``, by the layer-cake split at ``sM``."""
        s = np.asarray(s, dtype=float)
        return s * self.max * self._level_volume(s * self.max) + self.mass_below(s)


def radial_moment(n: int, rate: float) -> float:
    """``int_0^inf exp(-rate r) r^(n-1) dr = (n-1)! rate^-n``."""
    return math.factorial(n - 1) * rate ** (-n)


def analytic_mass(d: AnalyticDensity) -> float:
    return float(d.mass)


def analytic_max(d: AnalyticDensity) -> float:
    return float(d.max)


def analytic_level_volume(d: AnalyticDensity, t):
    out = d.level_volume(t)
    return float(out) if np.ndim(out) == 0 else out
