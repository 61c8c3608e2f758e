"""Integrated periodogram curves, pre-asymptotic centerings, and the
Grenander-Rosenblatt / Cramer-von Mises statistics.

Two algebraic forms of the same object: the continuous form
J(x) = psi_0(x) gamma(0) + 2 sum_h psi_h(x) gamma(h) over the full-lag
extremogram, and the discretized form, a cumulative Riemann sum of the
periodogram over the Fourier grid. On that grid the discretized form is
identical to replacing psi by its Riemann coefficients psi_hat.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from xgram import mc
from xgram.extremal import (
    ExtremogramEstimate,
    IndicatorSeries,
    indicators,
    sample_extremogram,
    threshold_from_p0,
)
from xgram.models import ModelSpec, simulate
from xgram.spectral import TWO_PI, WeightFunction, psi_matrix

_H_CHUNK = 256  # lags per block in the generic series evaluation


def fourier_grid(n: int) -> np.ndarray:
    """Default evaluation grid {2*pi*k/n : k = 0..floor(n/2)}."""
    return TWO_PI * np.arange(n // 2 + 1) / n


@dataclass(frozen=True, eq=False)
class IgramCurve:
    """J(x) on an increasing grid in [0, pi]."""

    grid: np.ndarray
    values: np.ndarray
    variant: str  # "continuous" | "discretized"
    standardized: bool
    m: float
    n: int

    def to_csv(self, center: "CenteringCurve | None" = None) -> str:
        if center is None:
            lines = ["x,J"]
            for x, v in zip(self.grid, self.values):
                lines.append(f"{float(x)!r},{float(v)!r}")
        else:
            lines = ["x,J,EJ"]
            for x, v, e in zip(self.grid, self.values, center.values):
                lines.append(f"{float(x)!r},{float(v)!r},{float(e)!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class CenteringCurve:
    """A centering for J: Monte Carlo E J, exact iid E J, or the
    eta-dependent partial sum built from the sample extremogram."""

    grid: np.ndarray
    values: np.ndarray
    provenance: str  # "monte_carlo" | "exact_iid" | "eta_partial_sum"
    variant: str | None = None
    eta: int | None = None
    model: ModelSpec | None = None
    reps: int | None = None
    seed: int | None = None
    mean_threshold: float | None = None


@dataclass(frozen=True)
class TestResult:
    """A GR or CvM statistic, optionally equipped with a critical value."""

    statistic: float
    kind: str  # "gr" | "cvm"
    rate: str  # "sqrt_n_over_m" | "sqrt_n"
    centering: str
    level: float | None = None
    critical_value: float | None = None
    quantile_source: str | None = None
    reject: bool | None = None

    def with_critical_value(self, critical_value: float, source: str,
                            level: float) -> "TestResult":
        return replace(
            self,
            critical_value=float(critical_value),
            quantile_source=source,
            level=float(level),
            reject=bool(self.statistic > critical_value),
        )


def _check_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 0 or grid[-1] > np.pi + 1e-12:
        raise ValueError("grid must lie in [0, pi]")
    return grid


def _series_eval(gamma: np.ndarray, g: WeightFunction, grid: np.ndarray) -> np.ndarray:
    """psi_0(x) gamma_0 + 2 sum_{h>=1} psi_h(x) gamma_h, chunked over h."""
    nlag = gamma.size
    if g.is_one:
        out = grid * gamma[0]
        for lo in range(1, nlag, _H_CHUNK):
            hi = min(lo + _H_CHUNK, nlag)
            h = np.arange(lo, hi)[:, None]
            out = out + 2.0 * ((gamma[lo:hi] / np.arange(lo, hi)) @ np.sin(h * grid[None, :]))
        return out
    psi_all = psi_matrix(g, nlag - 1, grid)
    return psi_all[0] * gamma[0] + 2.0 * (gamma[1:] @ psi_all[1:])


def _is_fourier_grid(grid: np.ndarray, n: int) -> bool:
    ref = fourier_grid(n)
    return grid.size == ref.size and np.array_equal(grid, ref)


def igram_continuous(ext: ExtremogramEstimate, g: WeightFunction,
                     grid: np.ndarray | None = None) -> IgramCurve:
    """Continuous-form integrated periodogram from a full-lag extremogram.

    J(x) = psi_0(x) gamma(0) + 2 sum_{h=1}^{n-1} psi_h(x) gamma(h). The
    extremogram must cover every lag 0..n-1. For g == 1 on the default
    Fourier grid the sine series is evaluated by one FFT.
    """
    if ext.gamma.size != ext.n:
        raise ValueError("igram_continuous needs the extremogram at all lags 0..n-1")
    n = ext.n
    grid = fourier_grid(n) if grid is None else _check_grid(grid)
    gamma = ext.gamma
    if g.is_one and _is_fourier_grid(grid, n):
        # sum_h (gamma_h/h) sin(2*pi*h*k/n) is the negated imaginary rfft part
        coeff = gamma / np.maximum(np.arange(n), 1)
        coeff[0] = 0.0
        s = np.fft.rfft(coeff, n)
        values = grid * gamma[0] - 2.0 * s.imag[: grid.size]
    else:
        values = _series_eval(gamma, g, grid)
    return IgramCurve(grid=grid, values=values, variant="continuous",
                      standardized=False, m=ext.m, n=n)


def _cumulative_bins(f_bins: np.ndarray, g: WeightFunction, n: int,
                     grid: np.ndarray) -> np.ndarray:
    """(2*pi/n) sum_{i <= x_n} f(w_i) g(w_i) for each grid x; f_bins holds
    f(w_i) for i = 0..floor(n/2) (index 0 unused)."""
    w = TWO_PI * np.arange(1, n // 2 + 1) / n
    weighted = f_bins[1 : n // 2 + 1] * (np.ones_like(w) if g.is_one else g(w))
    cum = np.concatenate([[0.0], (TWO_PI / n) * np.cumsum(weighted)])
    if _is_fourier_grid(grid, n):
        return cum.copy()
    idx = np.minimum(
        np.floor(n * grid / TWO_PI + 1e-9).astype(int), n // 2
    )
    return cum[idx]


def _discretized_values(centered: np.ndarray, m: float, n: int, g: WeightFunction,
                        grid: np.ndarray) -> np.ndarray:
    f = np.fft.rfft(centered)
    i_bins = (m / n) * np.abs(f) ** 2
    return _cumulative_bins(i_bins, g, n, grid)


def _discretized_from_gamma(gamma: np.ndarray, g: WeightFunction, n: int,
                            grid: np.ndarray) -> np.ndarray:
    """Discretized curve whose spectral ordinates come from a lag sequence:
    f(w_i) = gamma_0 + 2 sum_h gamma_h cos(h w_i)."""
    coeff = np.concatenate([[gamma[0]], 2.0 * gamma[1:]])
    f_bins = np.fft.rfft(coeff, n).real
    return _cumulative_bins(f_bins, g, n, grid)


def igram_discretized(ind: IndicatorSeries, g: WeightFunction,
                      grid: np.ndarray | None = None) -> IgramCurve:
    """Riemann-sum integrated periodogram on the Fourier grid.

    (2*pi/n) sum_{i <= x_n} I(w_i) g(w_i) after one FFT of the centered
    indicators; identical to the psi_hat-coefficient form of the curve.
    """
    n = ind.n
    if n < 4:
        raise ValueError("igram_discretized needs n >= 4")
    grid = fourier_grid(n) if grid is None else _check_grid(grid)
    values = _discretized_values(ind.centered(), ind.m, n, g, grid)
    return IgramCurve(grid=grid, values=values, variant="discretized",
                      standardized=False, m=ind.m, n=n)


def standardized_igram(curve: IgramCurve, ext: ExtremogramEstimate) -> IgramCurve:
    """Divide the curve by gamma(0); for g == 1 the result ends at pi."""
    g0 = float(ext.gamma[0])
    if not g0 > 0:
        raise ValueError("standardization needs gamma(0) > 0")
    return IgramCurve(grid=curve.grid, values=curve.values / g0,
                      variant=curve.variant, standardized=True, m=curve.m, n=curve.n)


def exact_iid_center(n: int, m: float, p0: float, g: WeightFunction,
                     grid: np.ndarray | None = None,
                     variant: str = "continuous") -> CenteringCurve:
    """E J under an iid null with theoretical indicator centering:
    psi_0(x) * m * p0 * (1 - p0) (all higher-lag expectations vanish)."""
    grid = fourier_grid(n) if grid is None else _check_grid(grid)
    level = m * p0 * (1.0 - p0)
    if variant == "continuous":
        values = psi_matrix(g, 0, grid)[0] * level
    elif variant == "discretized":
        values = _discretized_from_gamma(np.array([level]), g, n, grid)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return CenteringCurve(grid=grid, values=values, provenance="exact_iid",
                          variant=variant)


def eta_null_center(ext: ExtremogramEstimate, g: WeightFunction,
                    grid: np.ndarray | None = None, eta: int = 0,
                    variant: str = "continuous") -> CenteringCurve:
    """eta-dependent null centering psi_0 gamma(0) + 2 sum_{h<=eta} psi_h gamma(h).

    Built from the sample extremogram itself; statistics against it use the
    sqrt(n) rate. eta = 0 is the iid null; eta = n-1 reproduces the full
    curve of the matching variant.
    """
    if not 0 <= eta < ext.n:
        raise ValueError("eta must lie in [0, n)")
    if eta >= ext.gamma.size:
        raise ValueError("extremogram does not reach lag eta")
    grid = fourier_grid(ext.n) if grid is None else _check_grid(grid)
    head = ext.gamma[: eta + 1]
    if variant == "continuous":
        values = _series_eval(head, g, grid)
    elif variant == "discretized":
        values = _discretized_from_gamma(head, g, ext.n, grid)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return CenteringCurve(grid=grid, values=values, provenance="eta_partial_sum",
                          variant=variant, eta=eta)


def centering_monte_carlo(model: ModelSpec, n: int, p0: float, extreme_set,
                          g: WeightFunction, reps: int, seed: int,
                          centering: str = "theoretical",
                          variant: str = "continuous",
                          grid: np.ndarray | None = None,
                          workers: int | None = None) -> CenteringCurve:
    """Monte Carlo estimate of E J under the null model (section 4.4 workflow).

    Averages reps independent curves, each from its own derived stream, and
    records the Monte Carlo average threshold. reps >= 100 is the practical
    floor for a usable centering; smaller values are allowed (reps = 1 is
    the single-replicate identity) but noisy.

    The averaging tree and the replicate streams are fixed by (seed, reps),
    so the curve is bit-identical for any worker count.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if variant not in ("continuous", "discretized"):
        raise ValueError(f"unknown variant {variant!r}")
    grid = fourier_grid(n) if grid is None else _check_grid(grid)
    sub = mc.child_seed(seed, mc.CENTERING)

    def chunk(start: int, stop: int):
        acc = np.zeros(grid.size)
        am_acc = 0.0
        for r in range(start, stop):
            series = simulate(model, n, sub, replicate=r)
            thr = threshold_from_p0(series, extreme_set, p0)
            ind = indicators(series, thr, extreme_set, centering=centering)
            if variant == "continuous":
                ext = sample_extremogram(ind, max_lag=n - 1)
                acc += igram_continuous(ext, g, grid).values
            else:
                acc += _discretized_values(ind.centered(), ind.m, n, g, grid)
            am_acc += thr.a_m
        return acc, am_acc

    parts = mc.map_chunks(chunk, reps, workers)
    total = mc.tree_sum([p[0] for p in parts])
    am_total = mc.tree_sum([p[1] for p in parts])
    return CenteringCurve(grid=grid, values=total / reps, provenance="monte_carlo",
                          variant=variant, model=model, reps=reps, seed=seed,
                          mean_threshold=am_total / reps)


def _rate(center: CenteringCurve, curve: IgramCurve) -> tuple[str, float]:
    # eta-null centerings are self-normalized, hence the faster rate
    if center.provenance == "eta_partial_sum":
        return "sqrt_n", float(np.sqrt(curve.n))
    return "sqrt_n_over_m", float(np.sqrt(curve.n / curve.m))


def _check_match(curve: IgramCurve, center: CenteringCurve) -> None:
    if curve.grid.size != center.grid.size or not np.allclose(
        curve.grid, center.grid, rtol=0.0, atol=1e-12
    ):
        raise ValueError("curve and centering are on different grids")


def grs(curve: IgramCurve, center: CenteringCurve) -> TestResult:
    """Grenander-Rosenblatt statistic: rate * sup_x |J(x) - EJ(x)|.

    The supremum is a max over the curve grid. Rate is sqrt(n/m) against
    Monte Carlo / exact-iid centerings and sqrt(n) against eta-null
    centerings.
    """
    _check_match(curve, center)
    name, factor = _rate(center, curve)
    stat = factor * float(np.max(np.abs(curve.values - center.values)))
    return TestResult(statistic=stat, kind="gr", rate=name, centering=center.provenance)


def cvm(curve: IgramCurve, center: CenteringCurve) -> TestResult:
    """Cramer-von Mises statistic: rate^2 * integral of (J - EJ)^2 over the
    grid (trapezoid rule)."""
    _check_match(curve, center)
    name, factor = _rate(center, curve)
    diff = curve.values - center.values
    stat = factor * factor * float(np.trapezoid(diff * diff, curve.grid))
    return TestResult(statistic=stat, kind="cvm", rate=name, centering=center.provenance)
