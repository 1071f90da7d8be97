"""
Brunn-Minkowski stability for polygons
======================================

Convex polygons and intervals carry the geometric side: Minkowski sums,
the homothetic distance between two bodies, and the shift that aligns
two bodies with a third one that nearly contains their average.
"""

# %%
# Minkowski sums and the Brunn-Minkowski slack
# --------------------------------------------
import numpy as np

from plstab import Polygon
from plstab.generators import random_polygon
from plstab.geometry import brunn_minkowski_slack, check_bm_stability, homothetic_distance, minkowski_combine

rng = np.random.default_rng(7)
K, C = random_polygon(rng), random_polygon(rng)
S = minkowski_combine(K, C)
print(f"|K| = {K.area:.4f}, |C| = {C.area:.4f}, |K + C| = {S.area:.4f}")
print(f"sqrt|K+C| - sqrt|K| - sqrt|C| = {brunn_minkowski_slack(K, C):.4f}")

# %%
# Homothetic distance
# -------------------
# ``A`` compares volume-normalised bodies up to translation; homothets sit at 0.
sf = homothetic_distance(K, K.scale(2.0).translate([4.0, -1.0]))
print(f"A for a homothet: {sf.A:.2e}, sigma = {sf.sigma:.3f}")
rep = check_bm_stability(K, C)
print(rep.theorem.describe())
print(rep.product_form.describe())

# %%
# Recovering a shift
# ------------------
# If ``K/2 + C/2`` fits in ``L`` with ``|L|`` close to ``|K| = |C|``, both
# bodies are close to translates of ``L``.
from plstab.geometry import inflate_for_eta, recover_shift_lemma31

square = Polygon([[0, 0], [1, 0], [1, 1], [0, 1]])
moved = square.translate([0.6, -0.2])
for eta in (0.0, 1e-3, 1e-2):
    L = inflate_for_eta(square, moved, eta)
    sr = recover_shift_lemma31(square, moved, L, eta)
    print(f"eta={eta:<6} w={np.round(sr.w, 6)} |K d (L-w)|={sr.diff_K:.2e} bound={sr.bound:.3g}")

# %%
# Sumsets of interval unions
# --------------------------
# In one dimension a small excess ``delta = |X+Y| - |X| - |Y|`` forces
# both unions to nearly fill their hulls, provided ``delta < min(|X|, |Y|)``.
from plstab.geometry import interval_union_sumset

for X, Y in (([[0, 1], [1.2, 2]], [[0, 1]]), ([[0, 1], [10, 11]], [[0, 1]])):
    s = interval_union_sumset(X, Y)
    print(f"delta={s.delta:.3f} applicable={s.applicable} gaps=({s.gap_I:.3f}, {s.gap_J:.3f}) holds={s.holds}")
