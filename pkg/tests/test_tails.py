import math

import numpy as np
import pytest
import scipy.special as sp

from support_recovery.tails import (
    AggAsymptotic,
    Gaussian,
    GeneralizedGaussian,
    HeavierThanAgg,
    Laplace,
    LighterThanAgg,
    Pareto,
    asymptotic_quantile,
    lambert_w,
)

from oracles import bisect_quantile, normal_tail_cf

ALL_FAMILIES = [
    Gaussian(),
    Laplace(),
    GeneralizedGaussian(0.5),
    GeneralizedGaussian(1.0),
    GeneralizedGaussian(2.0),
    GeneralizedGaussian(3.0),
    AggAsymptotic(0.5),
    AggAsymptotic(2.0),
    HeavierThanAgg(gamma=2.0, c=1.0),
    LighterThanAgg(1.0),
    Pareto(2.0),
    Pareto(0.7),
]

AGG_TYPE = [Gaussian(), Laplace(), GeneralizedGaussian(0.5), GeneralizedGaussian(2.0), AggAsymptotic(1.0)]


# ---------------------------------------------------------------------------
# survival
# ---------------------------------------------------------------------------


def test_gaussian_survival_at_zero():
    assert Gaussian().survival(0.0) == pytest.approx(0.5, abs=1e-15)


def test_laplace_survival_log2():
    assert Laplace().survival(math.log(2.0)) == pytest.approx(0.25, abs=1e-15)


def test_gaussian_deep_tail_matches_mills_cf_oracle():
    # frozen from the continued-fraction oracle at sqrt(2 log 1e4)
    t = math.sqrt(2.0 * math.log(1e4))
    oracle = normal_tail_cf(t)
    assert oracle == pytest.approx(8.8562577562e-06, rel=1e-9)
    assert Gaussian().survival(t) == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_survival_strictly_decreasing_and_in_unit_interval(family):
    # probe via quantile spacing: linear-space survival saturates at exactly
    # 1.0 once 1 - F(x) drops below float64 resolution, for any implementation
    xs = np.asarray(family.quantile(np.linspace(0.0005, 0.9995, 401)))
    sf = np.asarray(family.survival(xs))
    assert np.all(sf > 0.0) and np.all(sf < 1.0)
    assert np.all(np.diff(sf) < 0.0)
    assert np.isfinite(family.log_survival(xs[-1] + 50.0))


def test_gg_matches_closed_form_half():
    # nu = 1/2: survival is exp(-2 sqrt x)(1 + 2 sqrt x)/2 on x >= 0
    fam = GeneralizedGaussian(0.5)
    for x in (0.5, 2.0, 10.0, 30.0):
        want = 0.5 * math.exp(-2.0 * math.sqrt(x)) * (1.0 + 2.0 * math.sqrt(x))
        assert fam.survival(x) == pytest.approx(want, rel=1e-12)


def test_gaussian_laplace_alias_agreement():
    xs = np.linspace(-10.0, 10.0, 201)
    assert np.max(np.abs(Gaussian().survival(xs) - GeneralizedGaussian(2.0).survival(xs))) <= 1e-12
    assert np.max(np.abs(Laplace().survival(xs) - GeneralizedGaussian(1.0).survival(xs))) <= 1e-12


def test_pareto_tail_is_exact_power_law():
    fam = Pareto(2.0)
    assert fam.survival(10.0) == pytest.approx(0.01, rel=1e-14)
    assert fam.survival(-10.0) == pytest.approx(0.99, rel=1e-14)


# ---------------------------------------------------------------------------
# quantile
# ---------------------------------------------------------------------------


def test_laplace_quantile_three_quarters():
    assert Laplace().quantile(0.75) == pytest.approx(math.log(2.0), abs=1e-14)


def test_gaussian_median_is_zero():
    assert Gaussian().quantile(0.5) == pytest.approx(0.0, abs=1e-12)


def test_gg_half_extreme_quantile_matches_bisection_oracle():
    # frozen from bisection against the closed-form survival oracle
    fam = GeneralizedGaussian(0.5)
    sf = lambda x: 0.5 * math.exp(-2.0 * math.sqrt(x)) * (1.0 + 2.0 * math.sqrt(x))
    want = bisect_quantile(sf, 1e-4, 0.0, 200.0)
    assert want == pytest.approx(30.2626002498, rel=1e-9)
    got = fam.quantile(1.0 - 1e-4)
    assert got == pytest.approx(want, rel=1e-10)
    assert fam.survival(got) == pytest.approx(1e-4, rel=1e-9)


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_quantile_survival_round_trip(family):
    qs = np.linspace(0.001, 0.999, 97)
    xs = np.asarray(family.quantile(qs))
    back = 1.0 - np.asarray(family.survival(xs))
    assert np.max(np.abs(back - qs)) <= 1e-10


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.7])
def test_quantile_rejects_out_of_range(family, q):
    with pytest.raises(ValueError):
        family.quantile(q)


# ---------------------------------------------------------------------------
# asymptotic quantiles
# ---------------------------------------------------------------------------


def test_asymptotic_quantile_values():
    assert asymptotic_quantile(2.0, math.e ** 2) == pytest.approx(2.0, rel=1e-12)
    assert asymptotic_quantile(1.0, 1000) == pytest.approx(math.log(1000.0), rel=1e-12)


def test_asymptotic_quantile_ratio_increases_to_one():
    fam = Gaussian()
    ratios = []
    for p in (1e2, 1e4, 1e6, 1e8, 1e10):
        ratios.append(fam.upper_quantile(p) / asymptotic_quantile(2.0, p))
    assert ratios[2] == pytest.approx(0.904, abs=5e-4)  # p = 1e6
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1.0


def test_asymptotic_quantile_domain():
    with pytest.raises(ValueError):
        asymptotic_quantile(2.0, 1)
    with pytest.raises(ValueError):
        asymptotic_quantile(0.0, 100)


def test_agg_asymptotic_upper_quantiles_are_exact():
    fam = AggAsymptotic(2.0)
    for p in (4, 100, 1e6):
        assert fam.upper_quantile(p) == pytest.approx(math.sqrt(2.0 * math.log(p)), rel=1e-14)


# ---------------------------------------------------------------------------
# tail-shape properties
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family", AGG_TYPE, ids=str)
def test_rapid_variation_ratio_decreases(family):
    t = 1.2
    ratios = [float(np.exp(family.log_survival(t * x) - family.log_survival(x))) for x in (5.0, 10.0, 20.0)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_rapid_variation_gaussian_small_at_20():
    fam = Gaussian()
    ratio = float(np.exp(fam.log_survival(24.0) - fam.log_survival(20.0)))
    assert ratio < 1e-2


def test_pareto_has_no_rapid_variation():
    fam = Pareto(2.0)
    t = 1.2
    for x in (5.0, 10.0, 20.0):
        assert fam.survival(t * x) / fam.survival(x) == pytest.approx(t ** -2.0, rel=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_agg_tail_law_monotone_approach(nu):
    # log survival / (-x^nu/nu) -> 1 monotonically along the probe points
    fam = GeneralizedGaussian(nu)
    errs = []
    for x in (5.0, 10.0, 20.0, 40.0):
        ratio = float(fam.log_survival(x)) / (-(x ** nu) / nu)
        errs.append(abs(ratio - 1.0))
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_log_survival_handles_linear_underflow():
    # survival(40) for the Gaussian underflows float64; the log path must not
    got = GeneralizedGaussian(2.0).log_survival(40.0)
    want = float(Gaussian().log_survival(40.0))
    assert got == pytest.approx(want, rel=1e-12)
    assert want < -800.0


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------


def test_lambert_w_pinned_points():
    assert lambert_w(0.0, 0) == pytest.approx(0.0, abs=1e-15)
    assert lambert_w(math.e, 0) == pytest.approx(1.0, rel=1e-14)
    assert lambert_w(-1.0 / math.e, -1) == pytest.approx(-1.0, abs=1e-12)
    assert lambert_w(-1.0 / math.e, 0) == pytest.approx(-1.0, abs=1e-12)


def test_lambert_w_inverts_principal_branch():
    rng = np.random.default_rng(3)
    xs = np.concatenate([
        rng.uniform(-1.0 / math.e + 1e-12, 0.0, 400),
        rng.uniform(0.0, 10.0, 400),
        10.0 ** rng.uniform(1.0, 12.0, 200),
    ])
    for x in xs:
        w = lambert_w(float(x), 0)
        assert w >= -1.0 - 1e-12
        assert w * math.exp(w) == pytest.approx(x, rel=1e-12, abs=1e-300)


def test_lambert_w_inverts_lower_branch():
    rng = np.random.default_rng(4)
    xs = np.concatenate([
        rng.uniform(-1.0 / math.e + 1e-12, -1e-6, 500),
        -(10.0 ** rng.uniform(-300.0, -6.0, 500)),
    ])
    for x in xs:
        w = lambert_w(float(x), -1)
        assert w <= -1.0 + 1e-12
        assert w * math.exp(w) == pytest.approx(x, rel=1e-12)


def test_lambert_w_agrees_with_scipy():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-1.0 / math.e + 1e-9, 5.0, 200):
        assert lambert_w(float(x), 0) == pytest.approx(float(sp.lambertw(x, 0).real), rel=1e-10)
    for x in rng.uniform(-1.0 / math.e + 1e-9, -1e-6, 200):
        assert lambert_w(float(x), -1) == pytest.approx(float(sp.lambertw(x, -1).real), rel=1e-10)


def test_lambert_w_domain_errors():
    with pytest.raises(ValueError):
        lambert_w(-0.5, 0)
    with pytest.raises(ValueError):
        lambert_w(0.1, -1)
    with pytest.raises(ValueError):
        lambert_w(-0.2, 2)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_gaussian_sampling_moments():
    rng = np.random.default_rng(11)
    x = Gaussian().sample(100_000, rng)
    assert abs(x.mean()) < 0.02
    assert abs(x.var() - 1.0) < 0.03


def test_pareto_sampling_tail_frequency():
    rng = np.random.default_rng(12)
    n = 100_000
    x = Pareto(2.0).sample(n, rng)
    frac = float((x > 10.0).mean())
    se = math.sqrt(0.01 * 0.99 / n)
    assert abs(frac - 0.01) <= 3.0 * se


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=str)
def test_single_draw_is_finite(family):
    rng = np.random.default_rng(13)
    x = family.sample(1, rng)
    assert x.shape == (1,)
    assert np.isfinite(x).all()


@pytest.mark.parametrize("family", [GeneralizedGaussian(0.5), AggAsymptotic(2.0), LighterThanAgg(1.0)], ids=str)
def test_sampling_matches_survival(family):
    # empirical exceedance frequency at the 10% point vs the model's own tail
    rng = np.random.default_rng(14)
    n = 200_000
    x = family.sample(n, rng)
    x10 = family.quantile(0.9)
    frac = float((x > x10).mean())
    assert abs(frac - 0.1) <= 3.0 * math.sqrt(0.1 * 0.9 / n)


def test_sampling_is_deterministic_given_stream():
    fam = GeneralizedGaussian(0.5)
    a = fam.sample(10, np.random.default_rng(7))
    b = fam.sample(10, np.random.default_rng(7))
    assert np.array_equal(a, b)


def test_sample_rejects_empty():
    with pytest.raises(ValueError):
        Gaussian().sample(0, np.random.default_rng(0))


# ---------------------------------------------------------------------------
# construction validation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("build", [
    lambda: GeneralizedGaussian(0.0),
    lambda: GeneralizedGaussian(-1.0),
    lambda: AggAsymptotic(0.0),
    lambda: HeavierThanAgg(gamma=1.0, c=1.0),
    lambda: HeavierThanAgg(gamma=2.0, c=0.0),
    lambda: LighterThanAgg(0.0),
    lambda: Pareto(0.0),
])
def test_invalid_shapes_rejected(build):
    with pytest.raises(ValueError):
        build()
