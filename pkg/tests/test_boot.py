"""Bootstrap difference bands, their rank readouts, and the naive baseline."""

import math

import numpy as np
import pytest

from ranksets.boot import (
    BootstrapConfig,
    DifferenceCS,
    boot_rank_cs,
    bootstrap_quantile,
    difference_cs,
    naive_rank_cs,
    resample,
    studentized_max_stat,
)
from ranksets.boot import _band_half_width
from ranksets.core import MultinomialSample, build_index_family

MELBOURNE = MultinomialSample((87, 75, 42, 21, 6, 2, 1))

# ---------------------------------------------------------------------------
# bootstrap_quantile


def test_quantile_order_statistic_convention():
    vals = list(range(1, 11))
    assert bootstrap_quantile(vals, 0.5) == 5.0
    assert bootstrap_quantile(vals, 0.55) == 6.0
    assert bootstrap_quantile(vals, 1.0) == 10.0
    assert bootstrap_quantile(vals, 0.05) == 1.0


def test_quantile_integer_product_is_not_bumped_by_float_fuzz():
    # 0.95 * 20 must index the 19th order statistic, not slip to the 20th.
    assert bootstrap_quantile(list(range(1, 21)), 0.95) == 19.0


def test_quantile_orders_infinities():
    vals = [1.0, math.inf, -math.inf, 2.0]
    assert bootstrap_quantile(vals, 0.25) == -math.inf
    assert bootstrap_quantile(vals, 1.0) == math.inf


def test_quantile_rejects_bad_inputs():
    with pytest.raises(ValueError):
        bootstrap_quantile([], 0.5)
    with pytest.raises(ValueError):
        bootstrap_quantile([1.0, math.nan], 0.5)
    with pytest.raises(ValueError):
        bootstrap_quantile([1.0], 0.0)
    with pytest.raises(ValueError):
        bootstrap_quantile([1.0], 1.5)
    with pytest.raises(ValueError):
        bootstrap_quantile([[1.0, 2.0], [3.0, 4.0]], 0.5)


def test_quantile_matches_brute_force_on_random_draws():
    rng = np.random.default_rng(11)
    for _ in range(50):
        vals = rng.normal(size=int(rng.integers(1, 40)))
        level = float(rng.uniform(0.01, 1.0))
        k = math.ceil(round(level * vals.size, 9))
        assert bootstrap_quantile(vals, level) == np.sort(vals)[k - 1]


# ---------------------------------------------------------------------------
# studentized_max_stat and the zero conventions


def test_stat_zero_over_zero_is_zero():
    # Both categories empty in the draw and in the data: 0/0 -> 0.
    boot = MultinomialSample((5, 0, 0))
    stat = studentized_max_stat(boot, (1.0, 0.0, 0.0), [(1, 2)])
    assert stat == 0.0


def test_stat_nonzero_over_zero_is_signed_infinity():
    boot = MultinomialSample((5, 0, 0))
    theta_hat = (0.8, 0.2, 0.0)
    # Pair (1, 2): numerator -(0.2 - 0.0), denominator 0.
    assert studentized_max_stat(boot, theta_hat, [(1, 2)], variant="lower") == -math.inf
    assert studentized_max_stat(boot, theta_hat, [(1, 2)], variant="upper") == math.inf
    assert studentized_max_stat(boot, theta_hat, [(1, 2)], variant="symm") == math.inf


def test_stat_hand_computed_value():
    boot = MultinomialSample((30, 70))
    stat = studentized_max_stat(boot, (0.5, 0.5), [(0, 1)], variant="lower")
    # numerator (0.3 - 0.7) - 0; sigma*^2 = .3*.7 + .7*.3 + 2*.3*.7 = 0.84
    expected = -0.4 / (math.sqrt(0.84) / math.sqrt(100))
    assert stat == pytest.approx(expected, rel=1e-12)


def test_stat_without_studentizing_uses_sqrt_n_scale():
    boot = MultinomialSample((30, 70))
    stat = studentized_max_stat(
        boot, (0.5, 0.5), [(0, 1)], studentize=False, variant="symm"
    )
    assert stat == pytest.approx(math.sqrt(100) * abs(2 * (0.3 - 0.5)), rel=1e-12)


def test_stat_takes_max_over_pairs():
    boot = MultinomialSample((10, 30, 60))
    theta_hat = (1 / 3, 1 / 3, 1 / 3)
    pairs = [(0, 1), (2, 1), (2, 0)]
    singles = [
        studentized_max_stat(boot, theta_hat, [pr], variant="lower") for pr in pairs
    ]
    combined = studentized_max_stat(boot, theta_hat, pairs, variant="lower")
    assert combined == max(singles)


def test_stat_rejects_unknown_variant():
    boot = MultinomialSample((5, 5))
    with pytest.raises(ValueError):
        studentized_max_stat(boot, (0.5, 0.5), [(0, 1)], variant="middle")


# ---------------------------------------------------------------------------
# resample


def test_resample_degenerate_vector_is_deterministic():
    rng = np.random.default_rng(0)
    for _ in range(5):
        boot = resample((1.0, 0.0, 0.0), 50, rng)
        assert boot.counts == (50, 0, 0)
        assert boot.n == 50


def test_resample_mean_matches_expectation_within_four_sigma():
    rng = np.random.default_rng(123)
    n, theta = 1000, (0.3, 0.7)
    draws = np.array([resample(theta, n, rng).counts[0] for _ in range(2000)])
    se_mean = math.sqrt(n * 0.3 * 0.7 / 2000)
    assert abs(draws.mean() - 300.0) <= 4 * se_mean


def test_resample_goodness_of_fit_smoke():
    rng = np.random.default_rng(42)
    theta = (0.5, 0.3, 0.2)
    boot = resample(theta, 10_000, rng)
    chi2 = sum(
        (obs - 10_000 * t) ** 2 / (10_000 * t) for obs, t in zip(boot.counts, theta)
    )
    assert chi2 < 20.0  # df = 2; far beyond any plausible quantile


# ---------------------------------------------------------------------------
# difference_cs


def test_difference_cs_sigma_uses_plugin_variance_of_a_difference():
    dcs = difference_cs(MELBOURNE, BootstrapConfig(B=50, seed=0))
    th = MELBOURNE.theta_hat
    for (j, k), sig in dcs.sigma.items():
        expected = math.sqrt(
            th[j] * (1 - th[j]) + th[k] * (1 - th[k]) + 2 * th[j] * th[k]
        )
        assert sig == pytest.approx(expected, rel=1e-12)


def test_difference_cs_defaults_to_all_ordered_pairs():
    dcs = difference_cs(MELBOURNE, BootstrapConfig(B=50, seed=0))
    assert len(dcs.pairs) == 7 * 6
    assert set(dcs.pairs) == {(j, k) for j in range(7) for k in range(7) if j != k}


def test_difference_cs_symm_width_without_studentizing_is_constant():
    cfg = BootstrapConfig(B=400, seed=2, studentize=False, shape="symm")
    dcs = difference_cs(MELBOURNE, cfg)
    width = 2 * dcs.crit[0] / math.sqrt(MELBOURNE.n)
    for pair in dcs.pairs:
        lo, hi = dcs.interval(pair)
        assert hi - lo == pytest.approx(width, rel=1e-12)
        d_hat = MELBOURNE.theta_hat[pair[0]] - MELBOURNE.theta_hat[pair[1]]
        assert lo <= d_hat <= hi


def test_difference_cs_one_sided_shapes_leave_one_end_infinite():
    lo_cs = difference_cs(MELBOURNE, BootstrapConfig(B=200, seed=5, shape="lower"))
    up_cs = difference_cs(MELBOURNE, BootstrapConfig(B=200, seed=5, shape="upper"))
    for pair in lo_cs.pairs:
        assert lo_cs.hi[pair] == math.inf
        assert up_cs.lo[pair] == -math.inf


def test_difference_cs_equi_is_intersection_of_half_level_one_sided():
    kw = dict(B=500, seed=3)
    equi = difference_cs(MELBOURNE, BootstrapConfig(shape="equi", **kw), alpha=0.10)
    one_lo = difference_cs(MELBOURNE, BootstrapConfig(shape="lower", **kw), alpha=0.05)
    one_up = difference_cs(MELBOURNE, BootstrapConfig(shape="upper", **kw), alpha=0.05)
    for pair in equi.pairs:
        assert equi.lo[pair] == one_lo.lo[pair]
        assert equi.hi[pair] == one_up.hi[pair]
    assert equi.crit == (one_lo.crit[0], one_up.crit[0])


def test_difference_cs_zero_frequency_pair_degenerates_to_a_point():
    deg = MultinomialSample((5, 0, 0))
    dcs = difference_cs(deg, BootstrapConfig(B=100, seed=1))
    # Every bootstrap ratio is 0/0 -> 0, so the critical value is 0, and
    # the (1, 2) pair has zero scale: its interval is the single point 0.
    assert dcs.crit == (0.0,)
    assert dcs.interval((1, 2)) == (0.0, 0.0)
    assert dcs.interval((0, 1)) == (1.0, 1.0)


def test_difference_cs_contains_and_covers():
    dcs = difference_cs(MELBOURNE, BootstrapConfig(B=300, seed=9))
    th = MELBOURNE.theta_hat
    deltas = {(j, k): th[j] - th[k] for j, k in dcs.pairs}
    assert dcs.covers(deltas)  # symm intervals are centered on d_hat
    assert dcs.contains((0, 1), th[0] - th[1])


def test_difference_cs_rejects_bad_alpha():
    with pytest.raises(ValueError):
        difference_cs(MELBOURNE, BootstrapConfig(B=10, seed=0), alpha=0.0)
    with pytest.raises(ValueError):
        difference_cs(MELBOURNE, BootstrapConfig(B=10, seed=0), alpha=1.0)


def test_difference_cs_marginal_coverage_two_categories():
    # p = 2, theta = (.5, .5), n = 2000: the studentized symmetric band
    # should cover the zero true difference at close to nominal rate.
    rng = np.random.default_rng(77)
    reps, n = 400, 2000
    hits = 0
    for i in range(reps):
        x = int(rng.binomial(n, 0.5))
        x = min(max(x, 1), n - 1)
        sample = MultinomialSample((x, n - x))
        dcs = difference_cs(sample, BootstrapConfig(B=400, seed=1_000 + i))
        hits += dcs.contains((0, 1), 0.0)
    assert abs(hits / reps - 0.95) <= 0.04


# ---------------------------------------------------------------------------
# boot_rank_cs: the constant-width band readout


def test_rank_cs_band_threshold_is_crit_times_largest_scale():
    anchored = build_index_family("upper", tuple(range(7)), 7)
    cfg = BootstrapConfig(B=500, seed=0, shape="symm")
    dcs = difference_cs(MELBOURNE, cfg, 0.05, anchored.pairs)
    half = _band_half_width(dcs, MELBOURNE.n)
    assert half == pytest.approx(
        dcs.crit[0] * max(dcs.sigma.values()) / math.sqrt(MELBOURNE.n), rel=1e-12
    )
    th = MELBOURNE.theta_hat
    manual = []
    for j in range(7):
        lo = 1 + sum(th[k] - th[j] > half for k in range(7) if k != j)
        hi = 7 - sum(th[j] - th[k] > half for k in range(7) if k != j)
        manual.append((lo, hi))
    rs = boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=500, seed=0))
    assert [rs.interval(j) for j in range(7)] == manual


def test_rank_cs_without_studentizing_band_equals_per_pair_readout():
    # All scales are 1, so the common band and the per-pair intervals
    # make identical claims: a difference is asserted iff its interval
    # excludes zero.
    cfg = BootstrapConfig(B=3000, seed=0, studentize=False)
    rs = boot_rank_cs(MELBOURNE, config=cfg)
    anchored = build_index_family("upper", tuple(range(7)), 7)
    dcs = difference_cs(
        MELBOURNE,
        BootstrapConfig(B=3000, seed=0, studentize=False, shape="symm"),
        0.05,
        anchored.pairs,
    )
    for j in range(7):
        lo = 1 + sum(dcs.hi[(j, k)] < 0 for k in range(7) if k != j)
        hi = 7 - sum(dcs.lo[(j, k)] > 0 for k in range(7) if k != j)
        assert rs.interval(j) == (lo, hi)


def test_rank_cs_survey_per_category_readouts():
    # Per-category (marginal) calibration at B = 10,000, seed 0.  The
    # two rarest categories hit an infinite studentized critical value
    # at the 95% level -- their resamples empty both categories with
    # probability just under 0.05 per draw -- so their sets are the
    # full range; dropping to 90% brings the quantile back to finite.
    cfg = BootstrapConfig(B=10_000, seed=0)
    cfg_plain = BootstrapConfig(B=10_000, seed=0, studentize=False)
    stud = [boot_rank_cs(MELBOURNE, J0=(j,), config=cfg).interval(j) for j in range(7)]
    assert stud == [(1, 2), (1, 2), (3, 4), (3, 7), (4, 7), (1, 7), (1, 7)]
    plain = [
        boot_rank_cs(MELBOURNE, J0=(j,), config=cfg_plain).interval(j)
        for j in range(7)
    ]
    assert plain == [(1, 2), (1, 2), (3, 4), (3, 7), (4, 7), (5, 7), (5, 7)]
    stud90 = [
        boot_rank_cs(MELBOURNE, J0=(j,), alpha=0.10, config=cfg).interval(j)
        for j in range(7)
    ]
    assert stud90[5] == (4, 7) and stud90[6] == (4, 7)


def test_rank_cs_joint_calibration_is_weakly_wider_than_per_category():
    cfg = BootstrapConfig(B=2000, seed=0)
    joint = boot_rank_cs(MELBOURNE, config=cfg)
    for j in range(7):
        solo = boot_rank_cs(MELBOURNE, J0=(j,), config=cfg)
        lo_j, hi_j = joint.interval(j)
        lo_s, hi_s = solo.interval(j)
        assert lo_j <= lo_s and hi_s <= hi_j


def test_rank_cs_one_sided_kinds_bound_one_side_only():
    cfg = BootstrapConfig(B=500, seed=0)
    lower = boot_rank_cs(MELBOURNE, kind="lower", config=cfg)
    upper = boot_rank_cs(MELBOURNE, kind="upper", config=cfg)
    for j in range(7):
        assert lower.interval(j)[1] == 7
        assert upper.interval(j)[0] == 1


def test_rank_cs_method_label_tracks_studentization():
    cfg = BootstrapConfig(B=50, seed=0)
    assert boot_rank_cs(MELBOURNE, config=cfg).method == "bootStud"
    cfg_plain = BootstrapConfig(B=50, seed=0, studentize=False)
    assert boot_rank_cs(MELBOURNE, config=cfg_plain).method == "boot"


def test_rank_cs_is_deterministic_for_a_seed():
    a = boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=800, seed=31))
    b = boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=800, seed=31))
    assert [a.interval(j) for j in range(7)] == [b.interval(j) for j in range(7)]


def test_rank_cs_fresh_entropy_does_not_poison_the_seeded_cache():
    boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=800, seed=None))
    a = boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=800, seed=31))
    b = boot_rank_cs(MELBOURNE, config=BootstrapConfig(B=800, seed=31))
    assert [a.interval(j) for j in range(7)] == [b.interval(j) for j in range(7)]


def test_rank_cs_three_category_coverage():
    # theta = (.5, .3, .2), n = 2000: ranks are well separated, and the
    # studentized band should cover the true ranks (1, 2, 3) at close
    # to (or above) the nominal 95% per category.
    rng = np.random.default_rng(5)
    reps = 300
    hits = np.zeros(3)
    for i in range(reps):
        counts = rng.multinomial(2000, (0.5, 0.3, 0.2))
        sample = MultinomialSample(tuple(int(c) for c in counts))
        for j, true_rank in enumerate((1, 2, 3)):
            rs = boot_rank_cs(
                sample, J0=(j,), config=BootstrapConfig(B=400, seed=9_000 + i)
            )
            hits[j] += rs.covers(j, true_rank, true_rank)
    assert (hits / reps >= 0.92).all()


# ---------------------------------------------------------------------------
# naive_rank_cs


def test_naive_counts_order_statistics_of_resampled_ranks():
    cfg = BootstrapConfig(B=10_000, seed=0)
    rs = naive_rank_cs(MELBOURNE, config=cfg)
    assert [rs.interval(j) for j in range(7)] == [
        (1, 2), (1, 2), (3, 3), (4, 4), (5, 6), (5, 7), (6, 7),
    ]
    assert rs.method == "naive"


def test_naive_undercovers_with_tied_categories():
    # Seven equally likely categories: every admissible rank interval
    # is the full range [1, 7], which the naive quantile interval very
    # rarely spans, so its set coverage collapses far below nominal.
    rng = np.random.default_rng(17)
    reps, hits = 200, 0
    theta = np.ones(7) / 7
    for i in range(reps):
        counts = rng.multinomial(234, theta)
        sample = MultinomialSample(tuple(int(c) for c in counts))
        rs = naive_rank_cs(sample, config=BootstrapConfig(B=400, seed=20_000 + i))
        hits += rs.covers(0, 1, 7)
    assert hits / reps <= 0.60


def test_naive_restricts_to_requested_categories():
    rs = naive_rank_cs(MELBOURNE, J0=(1, 4), config=BootstrapConfig(B=200, seed=0))
    assert set(rs.J0) == {1, 4}
    full = naive_rank_cs(MELBOURNE, config=BootstrapConfig(B=200, seed=0))
    for j in (1, 4):
        assert rs.interval(j) == full.interval(j)


def test_naive_rejects_bad_alpha():
    with pytest.raises(ValueError):
        naive_rank_cs(MELBOURNE, alpha=0.0, config=BootstrapConfig(B=10, seed=0))


# ---------------------------------------------------------------------------
# BootstrapConfig validation


def test_config_rejects_bad_knobs():
    with pytest.raises(ValueError):
        BootstrapConfig(B=0)
    with pytest.raises(ValueError):
        BootstrapConfig(shape="round")
