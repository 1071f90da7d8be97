import math

import numpy as np
import pytest

import derived_values as dv
from oracles import quad_l1
from plstab import (
    ConfigInvalid,
    DomainViolation,
    EpsilonOutOfRange,
    HypothesisNotMet,
    HypothesisViolated,
    OmegaNotBelowOne,
    ValidationError,
    WeightSumInvalid,
)
from plstab.core import Constants, Gaussian, Laplace, Uniform, integrate, translate_scale
from plstab.generators import random_log_concave
from plstab.legendre import lambda_mass_profile, sup_convolution_exact
from plstab.stability import (
    SWEEP_HEADER,
    bound_cor16,
    bound_thm15,
    bound_thm17,
    deficit_vs_distance_sweep,
    fit_exponent,
    gaussian_scale_epsilon,
    l1_distance,
    max_ratio_check,
    multi_deficit,
    omega,
    pl_deficit,
    recover_witness,
    shifted_l1,
    translative_l1,
    verify_lemma73,
    verify_lemma81,
    verify_level_inclusion,
    xi,
    xi_from_omega,
    xi_guards,
)

N = 4097


def oracle_l1(f, g, shift=0.0):
    return quad_l1(f.knots + shift, f.potential, g.knots, g.potential)


# --- deficit ------------------------------------------------------------------


def test_translated_gaussians_have_zero_deficit():
    rep = pl_deficit(Gaussian(0, 1).to_grid(N), Gaussian(2.5, 1).to_grid(N), 0.5)
    assert abs(rep.epsilon) <= 1e-7


def test_sigma_pair_deficit():
    rep = pl_deficit(Gaussian(0, 1).to_grid(N), Gaussian(0, 2).to_grid(N), 0.5)
    assert rep.epsilon == pytest.approx(dv.GAUSS_SIGMA_PAIR_MASS - 1, abs=1e-5)
    assert rep.a_ratio == pytest.approx(1.0, abs=1e-5)


def test_uniform_pair_deficit():
    f = Uniform(0, 1).to_grid(101)
    g = translate_scale(Uniform(0, 2).to_grid(201), 1.0, 0.0)
    rep = pl_deficit(f, g, 0.5)
    assert rep.epsilon == pytest.approx(dv.UNIFORM_PAIR_MASS - 1, rel=1e-13)


def test_deficit_report_lines():
    rep = pl_deficit(Gaussian(0, 1).to_grid(257), Gaussian(0, 1).to_grid(257), 0.5)
    lines = dict(line.split("=") for line in rep.as_lines())
    assert lines["epsilon"] == "0.000000"
    assert lines["satisfied_pl"] == "true"


# --- distances ----------------------------------------------------------------


def test_l1_distance_against_quadrature(rng):
    for _ in range(5):
        f, g = random_log_concave(rng, 200), random_log_concave(rng, 300)
        assert l1_distance(f, g) == pytest.approx(oracle_l1(f, g), rel=1e-9, abs=1e-12)
        s = float(rng.normal())
        assert shifted_l1(f, 1.0, s, g, 1.0) == pytest.approx(oracle_l1(f, g, s), rel=1e-9, abs=1e-12)


def test_translative_l1_recovers_shift():
    f = Gaussian(0, 1).to_grid(N)
    g = translate_scale(f, 1.7, 3.0)
    d, v = translative_l1(f, g)
    assert d <= 1e-9
    assert v == pytest.approx(3.0, abs=1e-8)


def test_translative_l1_normal_scale_pair():
    f, g = Gaussian(0, 1).to_grid(N), Gaussian(0, 2).to_grid(N)
    d, v = translative_l1(f, g)
    assert d == pytest.approx(dv.L1_N01_N04, abs=1e-5)
    # v = 0 is optimal by symmetry: the search may only do better than it
    assert d <= l1_distance(translate_scale(f, 1 / integrate(f), 0), translate_scale(g, 1 / integrate(g), 0)) + 1e-10


def test_translative_l1_identical_uniforms():
    f = Uniform(0, 1).to_grid(65)
    d, v = translative_l1(f, f)
    assert d == 0.0 and v == 0.0


def test_translative_l1_range(rng):
    for _ in range(5):
        d, _ = translative_l1(random_log_concave(rng, 200), random_log_concave(rng, 200))
        assert 0.0 <= d <= 2.0


# --- witness ------------------------------------------------------------------


@pytest.mark.parametrize("a, z, lam", [(0.5, 1.0, 0.3), (3.0, -2.0, 0.5), (1.0, 0.0, 0.7)])
def test_witness_equality_case(a, z, lam):
    f = Gaussian(0.2, 0.8).to_grid(N)
    g = translate_scale(f, a, z)
    rep = recover_witness(f, g, None, lam)
    assert rep.epsilon <= 1e-7
    assert rep.residual_f <= 1e-6 and rep.residual_g <= 1e-6
    assert rep.witness_w == pytest.approx(-z, abs=1e-6)


def test_witness_sigma_pair_reports_bound():
    rep = recover_witness(Gaussian(0, 1).to_grid(N), Gaussian(0, 2).to_grid(N), None, 0.5)
    assert rep.residual_f > 0 and rep.residual_g > 0
    assert rep.satisfied["thm15"]
    assert rep.bound_thm15 == pytest.approx(bound_thm15(rep.epsilon, 0.5), rel=1e-14)
    assert math.isfinite(rep.omega_eps)


def test_witness_equal_functions():
    f = Laplace(0, 1).to_grid(1025)
    rep = recover_witness(f, f, None, 0.4)
    assert rep.witness_w == 0.0
    assert rep.residual_f == pytest.approx(0.0, abs=1e-12)


def test_witness_with_supplied_h():
    f, g = Gaussian(0, 1).to_grid(1025), Gaussian(1, 1.5).to_grid(1025)
    h = sup_convolution_exact(f, g, 0.5)
    rep = recover_witness(f, g, h, 0.5)
    assert rep.mass_h == pytest.approx(integrate(h))


def test_witness_rejects_small_h():
    f, g = Gaussian(0, 1).to_grid(513), Gaussian(1, 1).to_grid(513)
    h = translate_scale(sup_convolution_exact(f, g, 0.5), 0.5, 0.0)
    with pytest.raises(HypothesisViolated):
        recover_witness(f, g, h, 0.5)


# --- bound formulas -----------------------------------------------------------


def test_omega_values():
    assert omega(math.exp(-1)) == pytest.approx(dv.OMEGA_E_INV, rel=1e-14)
    assert omega(1e-3) == pytest.approx(dv.OMEGA_1E_3, rel=1e-14)
    e = np.geomspace(1e-12, math.exp(-4) * 0.999, 50)
    assert np.all(np.diff([omega(v) for v in e]) > 0)
    assert omega(1e-3, Constants(c0_1d=2.0)) == pytest.approx(2 * dv.OMEGA_1E_3)
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(EpsilonOutOfRange):
            omega(bad)


def test_xi_values():
    x = xi_from_omega(math.exp(-6))
    assert x == pytest.approx(dv.XI_OMEGA_E6, rel=1e-14)
    assert xi_guards(x, 1)["xi_below_threshold"]
    with pytest.raises(OmegaNotBelowOne):
        xi_from_omega(1.0)
    with pytest.raises(OmegaNotBelowOne):
        xi(1e-3)  # omega(1e-3) > 1


def test_bound_cor16():
    assert bound_cor16(0.0, 0.5) == 0.0
    assert bound_cor16(1.0, 0.5, 1) == pytest.approx(0.5)
    assert bound_cor16(1.0, 0.5, 2) == pytest.approx(dv.COR16_N2, rel=1e-14)
    with pytest.raises(ValidationError):
        bound_cor16(2.5, 0.5)
    with pytest.raises(ValidationError):
        bound_cor16(1.0, 0.7)


def test_bound_thm17():
    assert bound_thm17(1 / 38, 0.5, 2, 1) == pytest.approx(dv.THM17_M2, rel=1e-14)
    assert bound_thm17(0.0, 0.5, 2) == 0.0
    vals = [bound_thm17(e, 0.25, 4) for e in np.geomspace(1e-9, 1, 20)]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(ValidationError):
        bound_thm17(0.1, 0.6, 2)


# --- several functions --------------------------------------------------------


def test_multi_deficit_equal_functions():
    f = Gaussian(0, 1).to_grid(2049)
    rep = multi_deficit([f, f, f], [0.2, 0.3, 0.5])
    assert abs(rep.epsilon) <= 1e-12
    np.testing.assert_allclose(rep.w, 0.0, atol=1e-12)
    np.testing.assert_allclose(rep.residuals, 0.0, atol=1e-9)


def test_multi_deficit_translates():
    f = Gaussian(0, 1).to_grid(N)
    zs = [0.0, 1.5, -2.0]
    lams = np.array([0.25, 0.25, 0.5])
    rep = multi_deficit([translate_scale(f, 1.0, z) for z in zs], lams)
    assert abs(rep.epsilon) <= 1e-7
    # f_i = h(x + w_i) with h centred at sum lam_i z_i
    expected = np.dot(lams, zs) - np.array(zs)
    np.testing.assert_allclose(rep.w, expected, atol=1e-6)
    assert abs(rep.gauge) <= 1e-12


def test_multi_deficit_uniforms():
    fs = [Uniform(0, 1).to_grid(129), Uniform(0, 2).to_grid(129), Uniform(0, 3).to_grid(129)]
    rep = multi_deficit(fs, [1 / 3, 1 / 3, 1 / 3])
    assert rep.epsilon > 0
    assert np.all(rep.residuals > 0)
    assert rep.satisfied
    assert abs(rep.gauge) <= 1e-12


def test_multi_deficit_scale_factors():
    fs = [translate_scale(Gaussian(0, 1).to_grid(1025), m, 0) for m in (1.0, 2.0, 4.0)]
    lams = np.array([0.5, 0.25, 0.25])
    rep = multi_deficit(fs, lams)
    masses = rep.masses
    for i in range(3):
        others = np.prod([masses[j] ** lams[j] for j in range(3) if j != i])
        assert rep.a[i] == pytest.approx(masses[i] ** (1 - lams[i]) / others, rel=1e-12)


def test_multi_deficit_weight_validation():
    f = Gaussian(0, 1).to_grid(65)
    with pytest.raises(WeightSumInvalid):
        multi_deficit([f, f], [0.5, 0.6])


# --- level inclusion ----------------------------------------------------------


def test_inclusion_equal_functions_is_tight():
    f = Gaussian(0, 1).to_grid(513)
    r = [0.1, 0.2, 0.3]
    rep = verify_level_inclusion(f, f, 0.5, (r, r))
    assert rep.holds
    diag = [c for c in rep.checks if c.name == "inclusion_left" and c.params["r"] == c.params["s"]]
    assert all(abs(c.slack) <= 1e-12 for c in diag)


def test_inclusion_gaussian_pair():
    rep = verify_level_inclusion(Gaussian(0, 1).to_grid(1025), Gaussian(1, 0.6).to_grid(1025), 0.5, 10)
    assert rep.holds and len(rep.checks) > 0


def test_inclusion_uniform_pair_equality():
    f, g = Uniform(0, 1).to_grid(65), Uniform(2, 4).to_grid(65)
    rep = verify_level_inclusion(f, g, 0.5, ([0.5, 1.0], [0.25, 0.5]))
    ms = [c for c in rep.checks if c.name == "minksum"]
    assert ms and all(abs(c.lhs - c.rhs) <= 1e-12 for c in ms)


def test_inclusion_general_lambda(rng):
    f, g = random_log_concave(rng, 300), random_log_concave(rng, 300)
    assert verify_level_inclusion(f, g, 0.3, 8).holds


# --- three-point mass profile ----------------------------------------------


def test_lemma73_sigma_pair():
    f, g = Gaussian(0, 1).to_grid(2049), Gaussian(0, 2).to_grid(2049)
    p = dict(lambda_mass_profile(f, g, [0.3, 0.5], check=False))
    rep = verify_lemma73(p[0.0], p[0.3], p[0.5], p[1.0], 0.3)
    assert rep.holds and rep.slack > 0


def test_lemma73_equality_family():
    rep = verify_lemma73(1.0, 1.0, 1.0, 1.0, 0.3)
    assert rep.eta == 0.0 and rep.lhs == 1.0 and rep.rhs == 1.0


def test_lemma73_concave_quadratic_profile():
    q = lambda t: -1.5 * (t - 0.4) ** 2 + 0.2 * t  # noqa: E731
    phi = {t: math.exp(q(t)) for t in (0.0, 0.25, 0.5, 1.0)}
    lam = 0.25
    eta = phi[lam] / (phi[0] ** (1 - lam) * phi[1] ** lam) - 1
    rep = verify_lemma73(phi[0], phi[lam], phi[0.5], phi[1], lam)
    assert rep.eta == pytest.approx(eta)
    assert rep.lhs == pytest.approx(phi[0.5])
    assert rep.rhs == pytest.approx((1 + eta / 0.25) * math.sqrt(phi[0] * phi[1]))
    assert rep.holds


def test_lemma73_hypothesis_not_met():
    with pytest.raises(HypothesisNotMet):
        verify_lemma73(1.0, 3.0, 1.0, 1.0, 0.3)
    with pytest.raises(HypothesisNotMet):
        verify_lemma73(1.0, 1.0, 1.0, 1.0, 0.3, eta=0.7)


# --- radial tail inequality -----------------------------------------------


def test_lemma81_equality_point():
    assert verify_lemma81(1.0, math.e**2, 2) == pytest.approx(0.0, abs=1e-12)


def test_lemma81_slack_positive():
    assert verify_lemma81(1.0, 2.0, 2) > 0
    assert verify_lemma81(0.5, 1.0 + 1e-9, 3) > 0


def test_lemma81_domain():
    for args in ((0.0, 2.0, 2), (1.0, 1.0, 2), (1.0, 2.0, 1)):
        with pytest.raises(DomainViolation):
            verify_lemma81(*args)


# --- sweeps -------------------------------------------------------------------


def test_gaussian_scale_sweep_is_monotone():
    params = 1 + np.geomspace(0.02, 0.5, 5)
    recs = deficit_vs_distance_sweep("gaussian-scale", params, n_nodes=2049, eps_nodes=16385)
    eps = [r.epsilon for r in recs]
    l1 = [r.l1 for r in recs]
    assert np.all(np.diff(eps) > 0) and np.all(np.diff(l1) > 0)
    for r, p in zip(recs, params):
        assert r.epsilon == pytest.approx(gaussian_scale_epsilon(p), rel=1e-3)
        assert r.bound19 <= r.epsilon
    assert len(recs[0].row()) == len(SWEEP_HEADER)


@pytest.mark.parametrize("family", ["gaussian-shift-mix", "uniform-width", "laplace-scale"])
def test_other_sweep_families(family):
    recs = deficit_vs_distance_sweep(family, [0.5 if family == "gaussian-shift-mix" else 1.5], n_nodes=1025, eps_nodes=4097)
    assert recs[0].epsilon > 0 and recs[0].l1 > 0


def test_identity_parameter_gives_zero():
    r = deficit_vs_distance_sweep("uniform-width", [1.0], n_nodes=257, eps_nodes=1025)[0]
    assert abs(r.epsilon) <= 1e-12 and r.l1 <= 1e-12


def test_sweep_config_errors():
    with pytest.raises(ConfigInvalid):
        deficit_vs_distance_sweep("nope", [1.0])
    with pytest.raises(ConfigInvalid):
        deficit_vs_distance_sweep("gaussian-scale", [])
    with pytest.raises(ConfigInvalid):
        deficit_vs_distance_sweep("gaussian-scale", [-1.0])


def test_fit_exponent_on_synthetic_records():
    from plstab.stability import SweepRecord

    recs = [SweepRecord("x", 0, 0.5, 1, 1, 1, 3 * d**2, d, 0, 0, 0, 0, 0) for d in np.geomspace(1e-3, 1e-1, 9)]
    slope, used = fit_exponent(recs)
    assert slope == pytest.approx(2.0, rel=1e-12) and used == 9
    assert math.isnan(fit_exponent(recs[:1])[0])


# --- maximum ratios -----------------------------------------------------------


def test_max_ratios_near_equality(rng):
    for _ in range(10):
        f = random_log_concave(rng, 1025)
        g = translate_scale(f, float(rng.uniform(0.5, 2)), float(rng.normal()))
        h = sup_convolution_exact(f, g, 0.5)
        if pl_deficit(f, g, 0.5, h).epsilon < 1e-3:
            r1, r2 = max_ratio_check(f, g, h)
            assert 0.5 < r1 < 2 and 0.5 < r2 < 2
