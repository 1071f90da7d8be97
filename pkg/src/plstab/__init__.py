"""Numerical laboratory for the Prekopa-Leindler inequality and its stability.

One-dimensional log-concave functions are stored through piecewise-linear
convex potentials, which makes sup-convolutions, level sets, L1 distances
and lifted bodies exact for the representation.
"""

from . import core, geometry, legendre, stability
from .bodies import ConvexBody, Interval, Polygon
from .core import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .geometry import (
    StabilityFunctional,
    check_bm_stability,
    homothetic_distance,
    interval_union_sumset,
    lift_area,
    lift_body,
    minkowski_combine,
    recover_shift_lemma31,
    symmetric_difference_volume,
    volume,
)
from .legendre import (
    ConjugateGrid,
    borell_ball_transform,
    lambda_mass_profile,
    legendre_inverse,
    legendre_transform,
    multi_sup_convolution,
    multi_sup_convolution_exact,
    sup_convolution,
    sup_convolution_bruteforce,
    sup_convolution_exact,
)
from .stability import (
    DeficitReport,
    SweepRecord,
    bound_cor16,
    bound_thm15,
    bound_thm17,
    deficit_vs_distance_sweep,
    fit_exponent,
    multi_deficit,
    omega,
    pl_deficit,
    recover_witness,
    translative_l1,
    verify_lemma73,
    verify_lemma81,
    verify_level_inclusion,
    xi,
)

__version__ = "0.1.0"
