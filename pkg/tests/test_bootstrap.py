"""Stationary bootstrap: index law, conditional moments, quantile engine."""

import numpy as np
import pytest
from scipy import stats as sps

import reference
from xgram import mc
from xgram.bootstrap import (
    BootstrapPlan,
    StarMoments,
    bootstrap_extremogram,
    bootstrap_igram_quantile,
    bootstrap_igram_statistics,
    estar_gamma,
    estar_gamma_all,
    sb_indices,
    star_moments,
    statistics_to_csv,
)
from xgram.extremal import IndicatorSeries, sample_extremogram
from xgram.spectral import WeightFunction

ONE = WeightFunction.one()


def make_ind(raw, p0=0.3):
    return IndicatorSeries(raw=np.asarray(raw, float), centering="none",
                           p0=p0, m=1.0 / p0)


def bernoulli_ind(n, seed=123, p=0.3):
    rng = np.random.default_rng(seed)
    return make_ind((rng.random(n) < p).astype(float), p0=p)


# ---------------------------------------------------------------- index law

def test_indices_shape_and_range():
    for theta in (0.02, 0.3, 0.9):
        plan = BootstrapPlan(n=37, theta=theta, reps=1, seed=4)
        for rep in range(3):
            idx = sb_indices(plan, rep)
            assert idx.shape == (37,) and idx.dtype == np.int64
            assert idx.min() >= 0 and idx.max() < 37


def test_indices_deterministic_per_replicate():
    plan = BootstrapPlan(n=50, theta=0.1, reps=1, seed=9)
    assert np.array_equal(sb_indices(plan, 2), sb_indices(plan, 2))
    assert not np.array_equal(sb_indices(plan, 2), sb_indices(plan, 3))


def test_theta_near_one_degenerates_to_iid_uniform():
    # every block has length 1, so the sequence is just the uniform starts
    n = 40
    plan = BootstrapPlan(n=n, theta=1.0 - 1e-12, reps=1, seed=31)
    idx = sb_indices(plan, 0)
    want = mc.stream(31, 0, mc.RESAMPLING).integers(0, n, size=n)
    assert np.array_equal(idx, want)


def test_block_restart_rate_matches_theta():
    # a transition either continues its block (idx steps by 1 mod n) or
    # restarts uniformly, so P(visible jump) = theta * (1 - 1/n)
    n, theta, reps = 1000, 0.1, 100
    plan = BootstrapPlan(n=n, theta=theta, reps=reps, seed=77)
    jumps = 0
    total = 0
    counts = np.zeros(n)
    for rep in range(reps):
        idx = sb_indices(plan, rep)
        jumps += int(np.sum(idx[1:] != (idx[:-1] + 1) % n))
        total += n - 1
        counts += np.bincount(idx, minlength=n)
    p = theta * (1.0 - 1.0 / n)
    se = np.sqrt(total * p * (1.0 - p))
    assert abs(jumps - total * p) <= 3.0 * se
    # marginal law of each index is uniform on 0..n-1
    assert sps.chisquare(counts).pvalue >= 1e-3


def test_plan_validation():
    with pytest.raises(ValueError):
        BootstrapPlan(n=1)
    with pytest.raises(ValueError):
        BootstrapPlan(n=10, theta=0.0)
    with pytest.raises(ValueError):
        BootstrapPlan(n=10, theta=1.0)
    with pytest.raises(ValueError):
        BootstrapPlan(n=10, reps=0)


# ---------------------------------------------------------------- resampled gamma

def test_identity_resample_recovers_empirical_extremogram():
    ind = bernoulli_ind(48)
    idx = np.arange(48)
    got = bootstrap_extremogram(ind, idx, max_lag=10)
    emp = IndicatorSeries(raw=ind.raw, centering="empirical", p0=ind.p0, m=ind.m)
    want = sample_extremogram(emp, max_lag=10)
    assert np.allclose(got.gamma, want.gamma, rtol=0, atol=1e-14)
    assert got.centering == "empirical"


def test_constant_series_resamples_to_zero():
    ind = make_ind(np.ones(20), p0=0.5)
    idx = sb_indices(BootstrapPlan(n=20, theta=0.2, reps=1, seed=1), 0)
    got = bootstrap_extremogram(ind, idx, max_lag=5)
    assert np.allclose(got.gamma, 0.0, atol=1e-15)
    assert got.rho is None


def test_bootstrap_extremogram_hand_case():
    raw = np.array([1, 0, 0, 1, 1, 0], dtype=float)
    ind = make_ind(raw, p0=0.5)
    idx = np.array([3, 3, 0, 5, 1, 2])
    got = bootstrap_extremogram(ind, idx, max_lag=5)
    v = (raw - raw.mean())[idx]
    for h in range(6):
        want = ind.m / 6 * sum(v[t] * v[t + h] for t in range(6 - h))
        assert abs(got.gamma[h] - want) < 1e-14
    with pytest.raises(ValueError):
        bootstrap_extremogram(ind, idx[:5])


# ---------------------------------------------------------------- E* gamma*

def test_estar_lag_zero_ignores_theta():
    ind = bernoulli_ind(64)
    hat = ind.raw - ind.raw.mean()
    want = ind.m / 64 * float(np.dot(hat, hat))
    for theta in (0.05, 0.5, 0.95):
        assert abs(estar_gamma(ind, theta, 0) - want) < 1e-14


def test_estar_vanishes_as_theta_approaches_one():
    ind = bernoulli_ind(64)
    for h in (1, 2, 5):
        assert abs(estar_gamma(ind, 1.0 - 1e-12, h)) < 1e-10


def test_estar_all_matches_scalar():
    ind = bernoulli_ind(64)
    all_vals = estar_gamma_all(ind, 0.2, 20)
    scalar = [estar_gamma(ind, 0.2, h) for h in range(21)]
    assert np.allclose(all_vals, scalar, rtol=0, atol=1e-12)
    with pytest.raises(ValueError):
        estar_gamma(ind, 0.2, 64)


def test_estar_matches_resampling_average():
    ind = bernoulli_ind(200, seed=5)
    theta, reps = 0.1, 20_000
    plan = BootstrapPlan(n=200, theta=theta, reps=reps, seed=303)
    sums = {h: [] for h in (1, 3, 7)}
    for rep in range(reps):
        got = bootstrap_extremogram(ind, sb_indices(plan, rep), max_lag=7)
        for h in sums:
            sums[h].append(got.gamma[h])
    for h, vals in sums.items():
        vals = np.asarray(vals)
        se = vals.std(ddof=1) / np.sqrt(reps)
        assert abs(vals.mean() - estar_gamma(ind, theta, h)) <= 4.0 * se


# ---------------------------------------------------------------- star moments

def test_star_moments_first_moment_is_zero():
    for seed in (1, 2, 3):
        ind = bernoulli_ind(50, seed=seed)
        sm = star_moments(ind, 0.3, h=2, s=4)
        assert abs(sm.e_star["hat_first"]) < 1e-15


def test_star_moments_against_independent_resampler():
    # Monte Carlo over a from-scratch resampler (different RNG family,
    # different block construction) pins the closed forms
    n, theta, R = 60, 0.25, 40_000
    ind = bernoulli_ind(n, seed=123)
    hat = ind.raw - ind.raw.mean()
    til = ind.raw - ind.p0
    for (h, s) in [(1, 3), (2, 2), (3, 1)]:
        sm = star_moments(ind, theta, h, s)
        idx = reference.sb_prefix_batch(np.random.default_rng(777), n, theta,
                                        R, s + h + 1)
        A_til = til[idx[:, 0]] * til[(idx[:, 0] + h) % n]
        B_til = til[idx[:, s]] * til[(idx[:, s] + h) % n]
        A_hat = hat[idx[:, 0]] * hat[idx[:, h]]
        B_hat = hat[idx[:, s]] * hat[idx[:, s + h]]
        for name, A, B in [("tilde_tilde", A_til, B_til),
                           ("hat_tilde", A_hat, B_til),
                           ("tilde_hat", A_til, B_hat),
                           ("hat_hat", A_hat, B_hat)]:
            U = (A - A.mean()) * (B - B.mean())
            se = U.std(ddof=1) / np.sqrt(R)
            assert abs(U.mean() - sm.cov_star[name]) <= 4.0 * se, name
        for name, A in [("hat", A_hat), ("tilde", A_til)]:
            se = A.std(ddof=1) / np.sqrt(R)
            assert abs(A.mean() - sm.e_star[name]) <= 4.0 * se, name


def test_star_moments_degenerate_boundary():
    # s = h sits on the s >= h branch of the hat_hat display
    ind = bernoulli_ind(40, seed=9)
    theta, h = 0.2, 3
    sm = star_moments(ind, theta, h, s=h)
    hat = ind.raw - ind.raw.mean()
    n = 40
    q = 1.0 - theta
    hat_h = float(np.dot(hat, np.roll(hat, -h))) / n
    quad = float(np.mean(hat * np.roll(hat, -h) * np.roll(hat, -h) * np.roll(hat, -2 * h)))
    assert abs(sm.cov_star["hat_hat"] - q ** (2 * h) * (quad - hat_h**2)) < 1e-14


def test_star_moments_variance_guard():
    with pytest.raises(ValueError):
        StarMoments(h=1, s=0, theta=0.2, cov_star={"tilde_tilde": -1.0})
    with pytest.raises(ValueError):
        StarMoments(h=1, s=0, theta=0.2, cov_star={"hat_hat": -0.5})
    # genuine covariances at s > 0 may be negative
    StarMoments(h=1, s=2, theta=0.2, cov_star={"tilde_tilde": -1.0})


def test_star_moments_validation():
    ind = bernoulli_ind(30)
    with pytest.raises(ValueError):
        star_moments(ind, 0.0, 1, 1)
    with pytest.raises(ValueError):
        star_moments(ind, 0.2, 30, 1)
    with pytest.raises(ValueError):
        star_moments(ind, 0.2, 1, -1)


def test_star_moments_s_zero_variances_nonnegative():
    for seed in (1, 7, 21):
        ind = bernoulli_ind(45, seed=seed)
        sm = star_moments(ind, 0.15, h=2, s=0)
        assert sm.cov_star["tilde_tilde"] >= -1e-10
        assert sm.cov_star["hat_hat"] >= -1e-10


# ---------------------------------------------------------------- quantile engine

def test_bootstrap_statistics_deterministic_across_workers():
    ind = bernoulli_ind(64)
    plan = BootstrapPlan(n=64, theta=0.2, reps=48, seed=6)
    a = bootstrap_igram_statistics(ind, ONE, plan, "gr", workers=1)
    b = bootstrap_igram_statistics(ind, ONE, plan, "gr", workers=4)
    assert np.array_equal(a, b)
    assert a.shape == (48,) and np.all(a >= 0)
    c = bootstrap_igram_statistics(ind, ONE, plan, "cvm", workers=3)
    assert np.all(c >= 0)


def test_bootstrap_single_replicate_quantile():
    ind = bernoulli_ind(32)
    plan = BootstrapPlan(n=32, theta=0.3, reps=1, seed=11)
    stat = bootstrap_igram_statistics(ind, ONE, plan, "gr")[0]
    assert bootstrap_igram_quantile(ind, ONE, plan, "gr", 0.95) == stat


def test_bootstrap_quantiles_are_ordered():
    ind = bernoulli_ind(64)
    plan = BootstrapPlan(n=64, theta=0.2, reps=200, seed=8)
    q95 = bootstrap_igram_quantile(ind, ONE, plan, "gr", 0.95)
    q99 = bootstrap_igram_quantile(ind, ONE, plan, "gr", 0.99)
    assert q99 >= q95 > 0


def test_bootstrap_statistics_validation():
    ind = bernoulli_ind(64)
    with pytest.raises(ValueError):
        bootstrap_igram_statistics(ind, ONE, BootstrapPlan(n=32), "gr")
    with pytest.raises(ValueError):
        bootstrap_igram_statistics(ind, ONE, BootstrapPlan(n=64), "ks")
    tiny = make_ind([1, 0], p0=0.5)
    with pytest.raises(ValueError):
        bootstrap_igram_statistics(tiny, ONE, BootstrapPlan(n=2), "gr")


def test_statistics_csv_format():
    txt = statistics_to_csv(np.array([1.5, 0.25]))
    lines = txt.strip().split("\n")
    assert lines[0] == "replicate,statistic"
    assert lines[1] == "0,1.5"
    assert lines[2] == "1,0.25"
