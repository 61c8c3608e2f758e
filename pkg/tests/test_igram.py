"""Integrated periodogram curves, centerings, and the two test statistics."""

import numpy as np
import pytest

import reference
from xgram.extremal import (
    ExtremeSet,
    ExtremogramEstimate,
    IndicatorSeries,
    indicators,
    sample_extremogram,
    threshold_from_p0,
)
from xgram.igram import (
    CenteringCurve,
    IgramCurve,
    TestResult as IgramResult,
    centering_monte_carlo,
    cvm,
    eta_null_center,
    exact_iid_center,
    fourier_grid,
    grs,
    igram_continuous,
    igram_discretized,
    standardized_igram,
)
from xgram.models import ModelSpec, simulate
from xgram.spectral import WeightFunction, periodogram_at, periodogram_fourier

ONE = WeightFunction.one()
TAB = WeightFunction.tabulated([0.0, 1.0, np.pi], [0.5, 2.0, 1.0])


def make_ind(raw, centering="none", p0=0.5):
    return IndicatorSeries(raw=np.asarray(raw, float), centering=centering,
                           p0=p0, m=1.0 / p0)


def full_ext(ind):
    return sample_extremogram(ind, max_lag=ind.n - 1)


def tail_indicators(n, seed, p0=0.2, centering="empirical"):
    s = simulate(ModelSpec(kind="IidT", df=3.0), n, seed=seed)
    thr = threshold_from_p0(s, ExtremeSet.upper_tail(), p0)
    return indicators(s, thr, ExtremeSet.upper_tail(), centering=centering)


# ---------------------------------------------------------------- continuous

def test_continuous_hand_case():
    ext = full_ext(make_ind([1, 0, 0, 1]))
    assert np.allclose(ext.gamma, [1.0, 0.0, 0.0, 0.5])
    grid = np.array([0.0, np.pi / 2, np.pi])
    curve = igram_continuous(ext, ONE, grid)
    assert curve.values[0] == 0.0
    assert abs(curve.values[1] - (np.pi / 2 - 1.0 / 3.0)) < 1e-14
    assert abs(curve.values[2] - np.pi * ext.gamma[0]) < 1e-14


def test_continuous_needs_full_lag_extremogram():
    ind = make_ind([1, 0, 1, 0, 1, 0])
    with pytest.raises(ValueError):
        igram_continuous(sample_extremogram(ind, max_lag=3), ONE)


def test_continuous_fft_path_matches_series_formula():
    ind = tail_indicators(128, seed=3)
    ext = full_ext(ind)
    curve = igram_continuous(ext, ONE)  # defaults to the Fourier grid
    grid = fourier_grid(128)
    assert np.array_equal(curve.grid, grid)
    for k in (0, 1, 17, 64):
        x = grid[k]
        h = np.arange(1, 128)
        direct = x * ext.gamma[0] + 2 * np.dot(np.sin(h * x) / h, ext.gamma[1:])
        assert abs(curve.values[k] - direct) < 1e-10


def test_continuous_matches_brute_force():
    rng = np.random.default_rng(14)
    grid = np.linspace(0.0, np.pi, 7)
    for case in range(8):
        n = int(rng.integers(4, 17))
        raw = (rng.random(n) < 0.5).astype(float)
        centering = ("none", "theoretical", "empirical")[case % 3]
        g = TAB if case < 2 else ONE
        ind = make_ind(raw, centering=centering, p0=0.4)
        got = igram_continuous(full_ext(ind), g, grid).values
        gfun = None if g.is_one else (lambda lam: float(g(np.array([lam]))[0]))
        bp = () if g.is_one else g.nodes
        want = reference.igram_continuous_ref(raw, centering, 0.4, 2.5, gfun,
                                              grid, breakpoints=bp)
        assert np.allclose(got, want, rtol=0, atol=1e-9)


def test_continuous_monotone_without_centering():
    # d/dx J = g(x) * periodogram(x) >= 0 when nothing is subtracted
    ind = tail_indicators(200, seed=5, centering="none")
    grid = np.linspace(0.0, np.pi, 200)
    for g in (ONE, TAB):
        values = igram_continuous(full_ext(ind), g, grid).values
        assert np.all(np.diff(values) >= -1e-12)


# ---------------------------------------------------------------- discretized

def test_discretized_no_exceedances_is_zero():
    curve = igram_discretized(make_ind(np.zeros(16)), ONE)
    assert np.array_equal(curve.values, np.zeros(curve.grid.size))


def test_discretized_zero_before_first_bin():
    ind = make_ind([1, 0, 1, 0, 0, 1, 0, 0])
    grid = np.array([0.0, 0.5 * 2 * np.pi / 8, 0.99 * 2 * np.pi / 8])
    assert np.array_equal(igram_discretized(ind, ONE, grid).values, np.zeros(3))


def test_discretized_matches_brute_force():
    rng = np.random.default_rng(15)
    grid = np.linspace(0.0, np.pi, 11)
    for case in range(6):
        n = 16
        raw = (rng.random(n) < 0.4).astype(float)
        centering = ("none", "theoretical", "empirical")[case % 3]
        g = TAB if case >= 4 else ONE
        ind = make_ind(raw, centering=centering, p0=0.4)
        got = igram_discretized(ind, g, grid).values
        gfun = None if g.is_one else (lambda lam: float(g(np.array([lam]))[0]))
        want = reference.igram_discretized_ref(raw, centering, 0.4, 2.5, gfun, grid)
        assert np.allclose(got, want, rtol=0, atol=1e-9)


def test_discretized_is_cumulative_step_function():
    ind = tail_indicators(64, seed=9)
    grid = np.linspace(0.0, np.pi, 300)
    values = igram_discretized(ind, ONE, grid).values
    assert np.all(np.diff(values) >= -1e-14)
    est = periodogram_fourier(ind)
    # first step equals the first weighted ordinate times 2*pi/n
    first = values[np.searchsorted(grid, est.frequencies[0] + 1e-9)]
    assert abs(first - 2 * np.pi / 64 * est.values[0]) < 1e-12


def test_parseval_bin_sum():
    ind = tail_indicators(128, seed=13, centering="none")
    est = periodogram_fourier(ind)
    gamma0 = full_ext(ind).gamma[0]
    total = (periodogram_at(ind, 0.0) + periodogram_at(ind, np.pi)
             + 2.0 * est.values.sum())
    assert abs(total - ind.n * gamma0) < 1e-10 * ind.n


def test_forms_converge_with_sample_size():
    # both forms estimate the same spectral mass; their gap is O(1/n) once
    # the extremogram actually decays. Averaged over seeds to tame the
    # replicate-to-replicate wobble.
    grid = np.linspace(0.0, np.pi, 41)
    gaps = []
    for n in (64, 128, 256, 512, 1024):
        per_seed = []
        for seed in range(5):
            ind = tail_indicators(n, seed=seed)
            c = igram_continuous(full_ext(ind), ONE, grid).values
            d = igram_discretized(ind, ONE, grid).values
            per_seed.append(np.max(np.abs(c - d)))
        gaps.append(np.mean(per_seed))
    ratios = np.array(gaps[:-1]) / np.array(gaps[1:])
    assert np.all(ratios >= 1.5)


# ---------------------------------------------------------------- centerings

def test_exact_iid_center_values():
    grid = np.linspace(0.0, np.pi, 5)
    c = exact_iid_center(100, 10.0, 0.1, ONE, grid=grid)
    assert np.allclose(c.values, grid * 0.9, rtol=0, atol=1e-14)
    assert c.provenance == "exact_iid"
    d = exact_iid_center(16, 10.0, 0.1, ONE, grid=grid, variant="discretized")
    xn = np.floor(16 * grid / (2 * np.pi) + 1e-9)
    assert np.allclose(d.values, 2 * np.pi / 16 * xn * 0.9, rtol=0, atol=1e-12)
    with pytest.raises(ValueError):
        exact_iid_center(16, 10.0, 0.1, ONE, variant="midpoint")


def test_eta_null_center_iid_case():
    ind = tail_indicators(64, seed=2)
    ext = full_ext(ind)
    grid = np.linspace(0.0, np.pi, 9)
    c = eta_null_center(ext, ONE, grid, eta=0)
    assert np.allclose(c.values, grid * ext.gamma[0], rtol=0, atol=1e-14)
    assert c.eta == 0 and c.provenance == "eta_partial_sum"


def test_eta_null_center_full_lag_reproduces_curve():
    ind = tail_indicators(32, seed=4)
    ext = full_ext(ind)
    grid = np.linspace(0.0, np.pi, 17)
    curve = igram_continuous(ext, ONE, grid)
    center = eta_null_center(ext, ONE, grid, eta=31)
    result = grs(curve, center)
    assert result.statistic < 1e-10
    assert result.rate == "sqrt_n"


def test_eta_null_center_hand_case():
    ext = ExtremogramEstimate(gamma=np.array([1.0, 0.25]), rho=None,
                              centering="none", m=2.0, n=8)
    grid = np.array([0.0, np.pi / 2])
    c = eta_null_center(ext, ONE, grid, eta=1)
    assert abs(c.values[1] - (np.pi / 2 + 0.5)) < 1e-14


def test_eta_null_center_validation():
    ext = ExtremogramEstimate(gamma=np.array([1.0, 0.25]), rho=None,
                              centering="none", m=2.0, n=8)
    with pytest.raises(ValueError):
        eta_null_center(ext, ONE, eta=-1)
    with pytest.raises(ValueError):
        eta_null_center(ext, ONE, eta=8)
    with pytest.raises(ValueError):
        eta_null_center(ext, ONE, eta=2)  # extremogram only reaches lag 1


def test_centering_monte_carlo_single_rep_identity():
    from xgram import mc

    model = ModelSpec(kind="IidT", df=3.0)
    n, p0, seed = 64, 0.2, 17
    grid = np.linspace(0.0, np.pi, 9)
    center = centering_monte_carlo(model, n, p0, ExtremeSet.upper_tail(), ONE,
                                   reps=1, seed=seed, centering="theoretical",
                                   grid=grid)
    sub = mc.child_seed(seed, mc.CENTERING)
    series = simulate(model, n, sub, replicate=0)
    thr = threshold_from_p0(series, ExtremeSet.upper_tail(), p0)
    ind = indicators(series, thr, ExtremeSet.upper_tail(), centering="theoretical")
    curve = igram_continuous(full_ext(ind), ONE, grid)
    assert np.array_equal(center.values, curve.values)
    assert center.mean_threshold == thr.a_m


def test_centering_monte_carlo_matches_exact_iid():
    model = ModelSpec(kind="IidT", df=3.0)
    n, p0, reps = 400, 0.1, 200
    grid = np.linspace(0.0, np.pi, 9)
    center = centering_monte_carlo(model, n, p0, ExtremeSet.upper_tail(), ONE,
                                   reps=reps, seed=21, centering="theoretical",
                                   grid=grid)
    exact = exact_iid_center(n, 1.0 / p0, p0, ONE, grid=grid)
    # independent replicate sample just to size the Monte Carlo error
    vals = np.empty((reps, grid.size))
    for r in range(reps):
        s = simulate(model, n, seed=909, replicate=r)
        thr = threshold_from_p0(s, ExtremeSet.upper_tail(), p0)
        ind = indicators(s, thr, ExtremeSet.upper_tail(), centering="theoretical")
        vals[r] = igram_continuous(full_ext(ind), ONE, grid).values
    se = vals.std(axis=0, ddof=1) / np.sqrt(reps)
    assert np.all(np.abs(center.values - exact.values) <= 3.0 * se + 1e-12)
    assert np.all(se[1:-1] > 0)


def test_centering_monte_carlo_deterministic_across_workers():
    model = ModelSpec(kind="IidT", df=3.0)
    kwargs = dict(n=80, p0=0.2, extreme_set=ExtremeSet.upper_tail(), g=ONE,
                  reps=70, seed=5, grid=np.linspace(0.0, np.pi, 5))
    a = centering_monte_carlo(model, **kwargs, workers=1)
    b = centering_monte_carlo(model, **kwargs, workers=4)
    c = centering_monte_carlo(model, **kwargs, workers=4)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(b.values, c.values)
    assert a.mean_threshold == b.mean_threshold


# ---------------------------------------------------------------- statistics

def synthetic_pair(grid, diff, provenance, n, m):
    curve = IgramCurve(grid=grid, values=diff, variant="continuous",
                       standardized=False, m=m, n=n)
    center = CenteringCurve(grid=grid, values=np.zeros_like(grid),
                            provenance=provenance, variant="continuous")
    return curve, center


def test_grs_constant_difference():
    grid = np.linspace(0.0, np.pi, 33)
    curve, center = synthetic_pair(grid, np.full(grid.size, -0.7),
                                   "monte_carlo", n=100, m=4.0)
    r = grs(curve, center)
    assert abs(r.statistic - np.sqrt(100 / 4.0) * 0.7) < 1e-12
    assert r.rate == "sqrt_n_over_m" and r.kind == "gr"
    curve2, center2 = synthetic_pair(grid, np.full(grid.size, -0.7),
                                     "eta_partial_sum", n=100, m=4.0)
    assert abs(grs(curve2, center2).statistic - 10 * 0.7) < 1e-12


def test_cvm_constant_difference():
    grid = np.linspace(0.0, np.pi, 33)
    curve, center = synthetic_pair(grid, np.ones(grid.size), "exact_iid",
                                   n=50, m=2.0)
    r = cvm(curve, center)
    assert abs(r.statistic - 25.0 * np.pi) < 1e-10
    assert r.kind == "cvm"


def test_cvm_quadrature_against_closed_form():
    # d(x) = c x + sum b_h sin(hx): integral of d^2 over [0, pi] in closed
    # form via orthogonality of the sine family
    c, b = 0.3, np.array([0.5, -0.2, 0.1])
    grid = np.linspace(0.0, np.pi, 65537)
    d = c * grid + sum(bh * np.sin((h + 1) * grid) for h, bh in enumerate(b))
    h = np.arange(1, b.size + 1)
    closed = (c * c * np.pi ** 3 / 3
              + 2 * c * np.dot(b, -np.pi * (-1.0) ** h / h)
              + np.pi / 2 * np.dot(b, b))
    curve, center = synthetic_pair(grid, d, "exact_iid", n=10, m=10.0)  # rate 1
    assert abs(cvm(curve, center).statistic - closed) < 2e-6


def test_statistics_require_matching_grids():
    curve, _ = synthetic_pair(np.linspace(0.0, np.pi, 9), np.zeros(9),
                              "exact_iid", n=10, m=2.0)
    _, center = synthetic_pair(np.linspace(0.0, np.pi, 11), np.zeros(11),
                               "exact_iid", n=10, m=2.0)
    with pytest.raises(ValueError):
        grs(curve, center)
    with pytest.raises(ValueError):
        cvm(curve, center)


def test_result_critical_value():
    r = IgramResult(statistic=2.0, kind="gr", rate="sqrt_n", centering="exact_iid")
    hit = r.with_critical_value(1.5, "bridge_closed_form", 0.05)
    assert hit.reject is True and hit.critical_value == 1.5
    assert hit.quantile_source == "bridge_closed_form" and hit.level == 0.05
    miss = r.with_critical_value(2.5, "bootstrap", 0.05)
    assert miss.reject is False


# ---------------------------------------------------------------- utilities

def test_standardized_igram():
    ind = make_ind([1, 0, 0, 1])
    ext = full_ext(ind)
    grid = np.array([0.0, np.pi / 2, np.pi])
    curve = igram_continuous(ext, ONE, grid)
    std = standardized_igram(curve, ext)
    assert std.standardized
    assert abs(std.values[2] - np.pi) < 1e-14  # gamma(0) cancels at pi
    assert abs(std.values[1] - (np.pi / 2 - 1.0 / 3.0)) < 1e-14  # gamma(0)=1
    bad = ExtremogramEstimate(gamma=np.array([0.0, 0.0]), rho=None,
                              centering="empirical", m=2.0, n=4)
    with pytest.raises(ValueError):
        standardized_igram(curve, bad)


def test_curve_csv_formats():
    grid = np.array([0.0, 1.0])
    curve = IgramCurve(grid=grid, values=np.array([0.0, 2.5]),
                       variant="continuous", standardized=False, m=2.0, n=8)
    assert curve.to_csv().startswith("x,J\n")
    center = CenteringCurve(grid=grid, values=np.array([0.0, 1.5]),
                            provenance="exact_iid")
    txt = curve.to_csv(center=center)
    assert txt.startswith("x,J,EJ\n")
    assert txt.strip().split("\n")[2] == "1.0,2.5,1.5"


def test_grid_validation():
    ind = make_ind([1, 0, 1, 0, 0, 1, 0, 1])
    with pytest.raises(ValueError):
        igram_discretized(ind, ONE, np.array([0.5, 0.4]))
    with pytest.raises(ValueError):
        igram_discretized(ind, ONE, np.array([0.5, 4.0]))
    with pytest.raises(ValueError):
        igram_discretized(ind, ONE, np.array([-0.5, 0.4]))
