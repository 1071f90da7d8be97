import math
import time

import numpy as np
import pytest

import derived_values as dv
from oracles import dense_supconv, direct_conjugate
from plstab import (
    GridTooLarge,
    NotDecreasing,
    NotLogConcave,
    SlopeRangeTooNarrow,
    ValidationError,
    WeightSumInvalid,
)
from plstab.battery import oracle_matrix
from plstab.core import Gaussian, Laplace, Uniform, integrate, make_grid_density, max_point, translate_scale
from plstab.core.levels import level_profile
from plstab.generators import random_log_concave
from plstab.legendre import (
    borell_ball_transform,
    lambda_mass_profile,
    legendre_inverse,
    legendre_transform,
    minkowski_support,
    multi_sup_convolution,
    multi_sup_convolution_exact,
    profile_second_differences,
    sup_convolution,
    sup_convolution_bruteforce,
    sup_convolution_exact,
)

# --- conjugates ---------------------------------------------------------------


def test_quadratic_is_self_dual():
    x = np.linspace(-4, 4, 801)
    cg = legendre_transform((x, x**2 / 2))
    p = np.linspace(-3, 3, 13)
    # the piecewise-linear interpolant of x^2/2 has conjugate within dx^2/8 of p^2/2
    np.testing.assert_allclose(legendre_inverse_conj(cg, p), p**2 / 2, atol=(x[1] - x[0]) ** 2 / 8 + 1e-14)


def legendre_inverse_conj(cg, p):
    """Conjugate values at arbitrary slopes: the conjugate is linear between sampled slopes."""
    return np.interp(p, cg.slopes, cg.u_star)


def test_conjugate_of_zero_on_unit_interval():
    x = np.linspace(0, 1, 11)
    cg = legendre_transform((x, np.zeros_like(x)), slopes=np.linspace(-2, 2, 41))
    np.testing.assert_allclose(cg.u_star, np.maximum(0, cg.slopes), atol=1e-15)


def test_conjugate_of_absolute_value():
    x = np.linspace(-5, 5, 101)
    cg = legendre_transform((x, np.abs(x)), slopes=np.linspace(-1, 1, 21))
    np.testing.assert_allclose(cg.u_star, 0.0, atol=1e-14)
    # outside [-1, 1] the conjugate grows like 5(|p| - 1) on this truncated domain
    cg2 = legendre_transform((x, np.abs(x)), slopes=np.array([-3.0, -1.0, 1.0, 3.0]))
    assert cg2.u_star[0] == pytest.approx(10.0) and cg2.u_star[-1] == pytest.approx(10.0)


def test_conjugate_matches_direct_maximum(rng):
    for _ in range(10):
        f = random_log_concave(rng, 300)
        cg = legendre_transform(f)
        ref = direct_conjugate(f.knots, f.potential, cg.slopes)
        np.testing.assert_allclose(cg.u_star, ref, rtol=0, atol=1e-12 * max(1, np.abs(ref).max()))


def test_conjugate_is_convex(rng):
    f = random_log_concave(rng, 500)
    cg = legendre_transform(f)
    p, c = cg.slopes, cg.u_star
    w = (p[1:-1] - p[:-2]) / (p[2:] - p[:-2])
    chord = (1 - w) * c[:-2] + w * c[2:]
    assert np.all(c[1:-1] <= chord + 1e-12 * np.maximum(1.0, np.abs(chord)))


def test_slope_range_too_narrow():
    f = Gaussian(0, 1).to_grid(101)
    with pytest.raises(SlopeRangeTooNarrow):
        legendre_transform(f, slopes=np.linspace(-1, 1, 5))


def test_conjugate_grid_fields():
    f = Laplace(0, 1).to_grid(65)
    cg = legendre_transform(f)
    assert cg.slope_lo == cg.slopes[0] and cg.slope_hi == cg.slopes[-1]
    assert cg.n_slopes == len(cg.u_star)


def test_double_conjugate_recovers_potential(rng):
    for _ in range(10):
        f = random_log_concave(rng, 400)
        back = legendre_inverse(legendre_transform(f), f.knots)
        assert np.max(np.abs(back - f.potential)) < 1e-9


# --- sup-convolution ----------------------------------------------------------


def test_equal_functions_are_a_fixed_point(rng):
    for lam in (0.2, 0.5, 0.9):
        f = random_log_concave(rng, 257)
        h = sup_convolution(f, f, lam)
        np.testing.assert_allclose(h.u, f.potential_at(h.nodes), rtol=0, atol=1e-9)
        he = sup_convolution_exact(f, f, lam)
        np.testing.assert_allclose(he.potential, f.potential_at(he.knots), rtol=0, atol=1e-9)


def test_translated_gaussians_average():
    w = 3.0
    f, g = Gaussian(0, 1).to_grid(2049), Gaussian(w, 1).to_grid(2049)
    h = sup_convolution(f, g, 0.5)
    x, m = max_point(h)
    assert x == pytest.approx(w / 2, abs=h.spacing)
    assert integrate(h) == pytest.approx(math.sqrt(integrate(f) * integrate(g)), rel=1e-9)
    assert integrate(h) == pytest.approx(1.0, abs=1e-5)
    ref = Gaussian(w / 2, 1)(h.nodes)
    assert np.max(np.abs(h.values - ref)) < 1e-6


def test_gaussian_sigma_pair_mass():
    f, g = Gaussian(0, 1).to_grid(4097), Gaussian(0, 2).to_grid(4097)
    h = sup_convolution(f, g, 0.5)
    assert integrate(h) == pytest.approx(dv.GAUSS_SIGMA_PAIR_MASS, abs=1e-4)
    # the exact piecewise form is as close as the input interpolants allow
    assert integrate(sup_convolution_exact(f, g, 0.5)) == pytest.approx(dv.GAUSS_SIGMA_PAIR_MASS, rel=5e-6)


def test_uniform_pair():
    f, g = Uniform(0, 1).to_grid(101), Uniform(0, 2).to_grid(201)
    h = sup_convolution(f, g, 0.5)
    assert (h.x_lo, h.x_hi) == pytest.approx((0.0, 1.5))
    np.testing.assert_allclose(h.values, 2**-0.5, rtol=1e-14)
    assert integrate(h) == pytest.approx(dv.UNIFORM_PAIR_MASS, rel=1e-14)


def test_support_additivity(rng):
    for _ in range(10):
        f, g = random_log_concave(rng, 200), random_log_concave(rng, 300)
        lam = rng.uniform(0.05, 0.95)
        h = sup_convolution(f, g, lam)
        lo = (1 - lam) * f.x_lo + lam * g.x_lo
        hi = (1 - lam) * f.x_hi + lam * g.x_hi
        assert abs(h.x_lo - lo) <= h.spacing and abs(h.x_hi - hi) <= h.spacing
        assert minkowski_support(f, g, lam) == pytest.approx((lo, hi))


def test_output_resolution_and_convexity(rng):
    f, g = random_log_concave(rng, 300), random_log_concave(rng, 700)
    h = sup_convolution(f, g, 0.3)
    assert h.n_nodes == 700
    d2 = np.diff(h.u, 2)
    assert np.all(d2 >= -1e-9 * max(1.0, np.ptp(h.u)))


def test_lambda_outside_open_interval():
    f = Gaussian(0, 1).to_grid(65)
    for lam in (0.0, 1.0, -0.1):
        with pytest.raises(ValidationError):
            sup_convolution(f, f, lam)


@pytest.mark.parametrize("case", oracle_matrix(512), ids=lambda c: c[0])
def test_oracle_matrix(case):
    _, f, g, lam = case
    h = sup_convolution(f, g, lam)
    t0 = time.perf_counter()
    b = sup_convolution_bruteforce(f, g, lam, h.nodes)
    assert time.perf_counter() - t0 <= 10.0
    assert np.max(np.abs(h.values - b.values)) < 1e-8


def test_bruteforce_agrees_with_dense_direct_oracle(rng):
    for _ in range(4):
        f, g = random_log_concave(rng, 60), random_log_concave(rng, 80)
        lam = float(rng.uniform(0.2, 0.8))
        b = sup_convolution_bruteforce(f, g, lam, 41)
        ref = dense_supconv(f.knots, f.potential, g.knots, g.potential, lam, b.nodes)
        np.testing.assert_allclose(b.u, ref, atol=1e-10)


def test_bruteforce_uniform_fixed_point():
    f = Uniform(0, 1).to_grid(33)
    b = sup_convolution_bruteforce(f, f, 0.4)
    np.testing.assert_allclose(b.values, 1.0, rtol=1e-15)


def test_small_lambda_is_close_to_f():
    f, g = Gaussian(0, 1).to_grid(1025), Gaussian(2, 1.5).to_grid(1025)
    h = sup_convolution_bruteforce(f, g, 0.001, 1025)
    x = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(h(x), f(x), rtol=0.02)
    assert integrate(h) == pytest.approx(integrate(f), rel=1e-2)


def test_bruteforce_size_limit():
    f = Gaussian(0, 1).to_grid(2049)
    with pytest.raises(GridTooLarge):
        sup_convolution_bruteforce(f, f, 0.5)


# --- several functions --------------------------------------------------------


def test_three_identical_gaussians():
    f = Gaussian(0, 1).to_grid(1025)
    h = multi_sup_convolution([f, f, f], [1 / 3, 1 / 3, 1 / 3])
    assert integrate(h) == pytest.approx(integrate(f), rel=1e-12)


def test_two_functions_reduce_to_pair(rng):
    f, g = random_log_concave(rng, 300), random_log_concave(rng, 300)
    a = multi_sup_convolution_exact([f, g], [0.7, 0.3])
    b = sup_convolution_exact(f, g, 0.3)
    assert np.array_equal(a.knots, b.knots) and np.array_equal(a.potential, b.potential)
    a = multi_sup_convolution([f, g], [0.7, 0.3])
    b = sup_convolution(f, g, 0.3)
    assert np.array_equal(a.u, b.u)


def _pair_exact(z, f1, f2, l1, l2):
    """``min_b l1 u1(b) + l2 u2((z - l1 b)/l2)``: a two-sweep over the knots of both."""
    b = f1.knots
    v1 = l1 * f1.potential[None, :] + l2 * f2.potential_at((z[:, None] - l1 * b[None, :]) / l2)
    c = f2.knots
    v2 = l2 * f2.potential[None, :] + l1 * f1.potential_at((z[:, None] - l2 * c[None, :]) / l1)
    return np.minimum(v1.min(axis=1), v2.min(axis=1))


def _triple_bruteforce(fs, lams, z, n_outer=4001):
    """``max prod f_i(x_i)^lam_i`` over ``sum lam_i x_i = z``.

    Dense loop over ``x_0`` (plus its knots) around an exact inner two-function minimum.
    """
    f0, f1, f2 = fs
    x0 = np.union1d(np.linspace(f0.x_lo, f0.x_hi, n_outer), f0.knots)
    out = np.full(len(z), np.inf)
    for a in x0:
        inner = _pair_exact(z - lams[0] * a, f1, f2, lams[1], lams[2])
        out = np.minimum(out, lams[0] * f0.potential_at(a) + inner)
    return out


def test_three_uniforms_against_triple_loop():
    fs = [Uniform(0, 1).to_grid(128), Uniform(0, 2).to_grid(128), Uniform(0, 3).to_grid(128)]
    lams = [1 / 3, 1 / 3, 1 / 3]
    h = multi_sup_convolution(fs, lams)
    z = h.nodes
    ref = np.exp(-_triple_bruteforce(fs, lams, z, 401))
    mass_ref = np.trapezoid(ref, z)
    assert integrate(h) == pytest.approx(mass_ref, abs=1e-6)


def test_associativity_against_triple_loop(rng):
    fs = [Gaussian(0, 1).to_grid(128), Laplace(1, 0.7).to_grid(128), Gaussian(-1, 0.5).to_grid(128)]
    lams = np.array([0.5, 0.3, 0.2])
    h = multi_sup_convolution_exact(fs, lams)
    z = np.linspace(-1, 1, 21)
    ref = _triple_bruteforce(fs, lams, z)
    # the outer loop is a sampled minimum, so it can only overestimate; its
    # spacing of about 7e-3 around the Laplace kink bounds the gap
    assert np.all(h.potential_at(z) <= ref + 1e-12)
    assert np.max(ref - h.potential_at(z)) < 5e-4


def test_weights_must_sum_to_one():
    f = Gaussian(0, 1).to_grid(65)
    with pytest.raises(WeightSumInvalid):
        multi_sup_convolution([f, f, f], [0.3, 0.3, 0.3])
    with pytest.raises(WeightSumInvalid):
        multi_sup_convolution([f], [1.0])


# --- lambda profile -----------------------------------------------------------


def test_profile_of_equal_functions_is_constant():
    f = Gaussian(0, 1).to_grid(513)
    rows = lambda_mass_profile(f, f, np.linspace(0.1, 0.9, 9))
    m = integrate(f)
    assert all(v == pytest.approx(m, rel=1e-12) for _, v in rows)


def test_profile_sigma_pair():
    f, g = Gaussian(0, 1).to_grid(4097), Gaussian(0, 2).to_grid(4097)
    rows = dict(lambda_mass_profile(f, g, [0.5]))
    assert rows[0.5] == pytest.approx(dv.GAUSS_SIGMA_PAIR_MASS, abs=1e-4)


def test_profile_of_probability_densities_is_at_least_one(rng):
    for _ in range(5):
        f, g = random_log_concave(rng, 300), random_log_concave(rng, 300)
        f = translate_scale(f, 1 / integrate(f), 0)
        g = translate_scale(g, 1 / integrate(g), 0)
        rows = lambda_mass_profile(f, g, np.linspace(1 / 32, 31 / 32, 31))
        assert min(v for _, v in rows) >= 1 - 1e-9
        assert np.max(profile_second_differences(rows)) <= 1e-8


def test_profile_rejects_bad_grid():
    f = Gaussian(0, 1).to_grid(65)
    with pytest.raises(ValidationError):
        lambda_mass_profile(f, f, [0.5, 0.2])


# --- substitution transform ---------------------------------------------------


def test_borell_ball_exponential():
    h = borell_ball_transform(lambda t: np.exp(-t))
    x = np.linspace(-5, 2, 15)
    np.testing.assert_allclose(h(x), np.exp(x - np.exp(x)), rtol=1e-6)
    assert integrate(h) == pytest.approx(1.0, abs=1e-8)


def test_borell_ball_indicator():
    h = borell_ball_transform(lambda t: (np.asarray(t) <= 1).astype(float))
    assert integrate(h) == pytest.approx(1.0, abs=1e-8)
    x = np.linspace(-10, -0.01, 12)
    np.testing.assert_allclose(h(x), np.exp(x), rtol=1e-9)
    assert h.x_hi == pytest.approx(0.0, abs=1e-12)


def test_borell_ball_cubic_tail():
    # 1/(1+t)^3 is log-convex, but H(e^x) e^x is log-concave, which is what the transform needs
    h = borell_ball_transform(lambda t: 1.0 / (1.0 + np.asarray(t)) ** 3)
    assert integrate(h) == pytest.approx(0.5, abs=1e-8)


def test_borell_ball_level_profile_input():
    f = Laplace(0, 1).to_grid(2049)
    prof = level_profile(f, 1024)
    h = borell_ball_transform(prof)
    assert integrate(h) == pytest.approx(prof.integral(), rel=1e-6)


def test_borell_ball_errors():
    with pytest.raises(NotDecreasing):
        borell_ball_transform(lambda t: np.minimum(np.asarray(t), 1.0) * np.exp(-np.asarray(t)))
    with pytest.raises(NotLogConcave):
        # decreasing but with a kink that makes H(e^x) e^x log-convex somewhere
        borell_ball_transform(lambda t: np.where(np.asarray(t) < 1, 1.0, 1e-3 * np.exp(-np.asarray(t) / 50)))


def test_make_grid_roundtrip_through_values():
    f = Gaussian(0.5, 0.7).to_grid(129)
    g = make_grid_density(f.nodes, f.values)
    np.testing.assert_array_equal(g.values, f.values)
    assert math.isclose(integrate(g), integrate(f), rel_tol=1e-14)
