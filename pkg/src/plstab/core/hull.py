"""Log-concave hull: the smallest log-concave majorant of sampled values."""

from __future__ import annotations

import numpy as np

from ..errors import EmptySupport, ValidationError
from .functions import PotentialGrid, _uniform_check


def lower_convex_envelope(x, u, tol: float = 1e-12) -> np.ndarray:
    """Indices of the lower convex hull of ``(x[i], u[i])`` (monotone chain).

    A point is discarded only when it lies above the chord of its
    neighbours by more than ``tol`` (relative), so inputs that are already
    convex keep every knot and the envelope is idempotent.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    scale = tol * max(1.0, float(np.ptp(u)))
    keep: list[int] = []
    for i in range(len(x)):
        while len(keep) >= 2:
            j, k = keep[-2], keep[-1]
            # height of k above the chord from j to i
            chord = u[j] + (u[i] - u[j]) * (x[k] - x[j]) / (x[i] - x[j])
            if u[k] - chord > scale:
                keep.pop()
            else:
                break
        keep.append(i)
    return np.array(keep)


def log_concave_hull(x, values=None, tol: float = 1e-12) -> PotentialGrid:
    """Smallest log-concave majorant of nonnegative samples on a uniform grid.

    The potential of the result is the lower convex envelope of the finite
    points of ``-log(values)``, evaluated at every grid node between the
    first and last positive sample; outside that range it is ``+inf``.

    ``x`` may also be a :class:`PotentialGrid`, in which case its potential
    is used directly (no exp/log round trip), so that hulls of hulls are
    reproduced node for node.
    """
    if isinstance(x, PotentialGrid):
        return _hull_of_potential(x.nodes, x.u, tol)
    x = np.asarray(x, dtype=float)
    v = np.asarray(values, dtype=float)
    if x.shape != v.shape or x.ndim != 1 or len(x) < 2:
        raise ValidationError("need matching 1-D arrays of at least 2 samples")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise ValidationError("samples must be finite and nonnegative")
    _uniform_check(x)
    with np.errstate(divide="ignore"):
        u = -np.log(v)
    return _hull_of_potential(x, u, tol)


def _hull_of_potential(x, u, tol):
    pos = np.flatnonzero(np.isfinite(u))
    if len(pos) == 0:
        raise EmptySupport("all samples are zero")
    if len(pos) == 1:
        raise EmptySupport("a single positive sample has zero mass")
    idx = lower_convex_envelope(x[pos], u[pos], tol)
    lo, hi = pos[0], pos[-1]
    env = np.interp(x[lo : hi + 1], x[pos][idx], u[pos][idx])
    # never raise the potential above the data (keeps exact idempotence)
    out = np.full(len(x), np.inf)
    out[lo : hi + 1] = np.minimum(env, u[lo : hi + 1])
    return PotentialGrid(float(x[0]), float(x[-1]), out)
