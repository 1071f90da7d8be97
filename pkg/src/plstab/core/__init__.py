"""Representation and analysis of 1-D log-concave functions."""

from .analytic import (
    AnalyticDensity,
    Exponential,
    Gaussian,
    Laplace,
    RadialExp,
    Uniform,
    analytic_level_volume,
    analytic_mass,
    analytic_max,
    kappa,
    radial_moment,
)
from .checks import BoundCheck
from .constants import Constants
from .functions import (
    LogConcaveFunction,
    PiecewiseLogLinear,
    PotentialGrid,
    integrate,
    level_volumes,
    make_grid_density,
    max_point,
    moments,
    normalized,
    partial_integral,
    superlevel_set,
    translate_scale,
)
from .hull import log_concave_hull
from .levels import (
    LevelProfile,
    bounded_levels_check,
    closetomax_margin,
    level_bound_checks,
    level_profile,
    symmetric_decreasing_rearrangement,
)

__all__ = [
    "AnalyticDensity",
    "BoundCheck",
    "Constants",
    "Exponential",
    "Gaussian",
    "Laplace",
    "LevelProfile",
    "LogConcaveFunction",
    "PiecewiseLogLinear",
    "PotentialGrid",
    "RadialExp",
    "Uniform",
    "analytic_level_volume",
    "analytic_mass",
    "analytic_max",
    "bounded_levels_check",
    "closetomax_margin",
    "integrate",
    "kappa",
    "level_bound_checks",
    "level_profile",
    "level_volumes",
    "log_concave_hull",
    "make_grid_density",
    "max_point",
    "moments",
    "normalized",
    "partial_integral",
    "radial_moment",
    "superlevel_set",
    "symmetric_decreasing_rearrangement",
    "translate_scale",
]
