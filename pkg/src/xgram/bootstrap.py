"""Stationary bootstrap for the extremogram and the integrated periodogram.

Resampling concatenates blocks of geometric length started at uniform
positions, indices wrapping modulo n. Conditional moments of the resampled
products have closed forms (circular sums over the original sample); the
quantile engine resamples the discretized integrated periodogram and
centers it at its exact conditional expectation E* J*.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from xgram import mc
from xgram.extremal import (
    ExtremogramEstimate,
    IndicatorSeries,
    circular_product_sums,
    default_max_lag,
    lagged_product_sums,
)
from xgram.igram import _check_grid, _discretized_from_gamma, _discretized_values, fourier_grid
from xgram.spectral import WeightFunction

DEFAULT_THETA = 1.0 / 50.0
DEFAULT_REPS = 4000


@dataclass(frozen=True)
class BootstrapPlan:
    """Stationary-bootstrap configuration: block parameter theta (mean block
    length 1/theta), replication count, seed, and the sample length the
    index sequences must match."""

    n: int
    theta: float = DEFAULT_THETA
    reps: int = DEFAULT_REPS
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")


def sb_indices(plan: BootstrapPlan, replicate: int = 0) -> np.ndarray:
    """One resampling index sequence of length n (0-based, values in 0..n-1).

    Blocks (K, K+1, ..., K+L-1) with K uniform and L geometric(theta) are
    drawn lazily until they cover n entries, concatenated, reduced modulo n,
    and truncated to exactly n. Deterministic given (plan.seed, replicate).
    """
    n = plan.n
    gen = mc.stream(plan.seed, replicate, mc.RESAMPLING)
    batch = max(16, int(n * plan.theta) + 1)
    starts, lens, total = [], [], 0
    while total < n:
        starts.append(gen.integers(0, n, size=batch))
        lens.append(gen.geometric(plan.theta, size=batch))
        total += int(lens[-1].sum())
    starts = np.concatenate(starts)
    lens = np.concatenate(lens)
    cum = np.cumsum(lens)
    k = int(np.searchsorted(cum, n)) + 1  # first k blocks reach n entries
    starts, lens, cum = starts[:k], lens[:k], cum[:k]
    offsets = np.arange(cum[-1]) - np.repeat(cum - lens, lens)
    idx = (np.repeat(starts, lens) + offsets) % n
    return idx[:n].astype(np.int64)


def _hat(ind: IndicatorSeries) -> np.ndarray:
    # Bootstrap centering always subtracts the original-sample mean.
    return ind.raw - ind.raw.mean()


def _tilde(ind: IndicatorSeries) -> np.ndarray:
    return ind.raw - ind.p0


def bootstrap_extremogram(ind: IndicatorSeries, idx: np.ndarray,
                          max_lag: int | None = None) -> ExtremogramEstimate:
    """Extremogram of one bootstrap resample.

    gamma*(h) = (m/n) sum_{t=1}^{n-h} Ihat_{t*} Ihat_{(t+h)*}: products pair
    positions t and t+h of the resampled sequence, and Ihat subtracts the
    original sample mean, never a per-resample mean.
    """
    idx = np.asarray(idx)
    if idx.shape != (ind.n,):
        raise ValueError("index sequence must have length n")
    n = ind.n
    if max_lag is None:
        max_lag = min(default_max_lag(n), n - 1)
    v = _hat(ind)[idx]
    gamma = (ind.m / n) * lagged_product_sums(v, max_lag)
    rho = gamma / gamma[0] if gamma[0] > 0 else None
    return ExtremogramEstimate(gamma=gamma, rho=rho, centering="empirical", m=ind.m, n=n)


def estar_gamma(ind: IndicatorSeries, theta: float, h: int) -> float:
    """Exact conditional expectation of bootstrap_extremogram at lag h:
    (1 - h/n)(1 - theta)^h (m/n) sum_{t=1}^n Ihat_t Ihat_{t+h}, circular."""
    n = ind.n
    if not 0 <= h < n:
        raise ValueError("h must lie in [0, n)")
    hat = _hat(ind)
    circ = float(np.dot(hat, np.roll(hat, -h)))
    return (1.0 - h / n) * (1.0 - theta) ** h * (ind.m / n) * circ


def estar_gamma_all(ind: IndicatorSeries, theta: float, max_lag: int) -> np.ndarray:
    """estar_gamma for h = 0..max_lag in one pass (circular sums by FFT)."""
    n = ind.n
    circ = circular_product_sums(_hat(ind), max_lag)
    h = np.arange(max_lag + 1)
    return (1.0 - h / n) * (1.0 - theta) ** h * (ind.m / n) * circ


def _circ_pair(v: np.ndarray, w: np.ndarray, lag: int) -> float:
    """n^-1 sum_i v_i w_{i+lag}, circular."""
    return float(np.dot(v, np.roll(w, -lag))) / v.size


def _circ_quad(a, la, b, lb, c, lc, d, ld) -> float:
    """n^-1 sum_i a_{i+la} b_{i+lb} c_{i+lc} d_{i+ld}, circular."""
    prod = np.roll(a, -la) * np.roll(b, -lb) * np.roll(c, -lc) * np.roll(d, -ld)
    return float(prod.mean())


@dataclass(frozen=True)
class StarMoments:
    """Closed-form conditional moments of resampled indicator products.

    e_star holds the first and second moments ("hat_first", "hat",
    "tilde"); cov_star the four covariance displays keyed by the centering
    of the two products ("tilde_tilde", "hat_tilde", "tilde_hat",
    "hat_hat"). s = 0 makes the same-centering entries variances, which
    must be nonnegative up to rounding; at general s they are genuine
    covariances and carry either sign.
    """

    h: int
    s: int
    theta: float
    e_star: dict = field(default_factory=dict)
    cov_star: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.s == 0:
            for key in ("tilde_tilde", "hat_hat"):
                if key in self.cov_star and self.cov_star[key] < -1e-10:
                    raise ValueError(f"variance {key} at s=0 is negative: {self.cov_star[key]}")


def star_moments(ind: IndicatorSeries, theta: float, h: int, s: int) -> StarMoments:
    """Every closed-form conditional moment of the resampled products.

    Position offsets follow the resampling convention: a starred position
    (1+h)* is the (1+h)-th element of the resample, while 1*+h is the
    original-series neighbor h steps past the first resampled index. All
    sums over the original sample are circular. The "hat_hat" covariance
    has two branches (s < h and s >= h); s = h is the degenerate boundary
    where the extra between-block term vanishes.
    """
    n = ind.n
    if not (0 <= h < n and 0 <= s < n):
        raise ValueError("lags must lie in [0, n)")
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    hat = _hat(ind)
    til = _tilde(ind)
    q = 1.0 - theta

    hat_h = _circ_pair(hat, hat, h)      # n^-1 sum Ihat_i Ihat_{i+h}
    hat_s = _circ_pair(hat, hat, s)
    til_h = _circ_pair(til, til, h)      # n^-1 sum Itil_i Itil_{i+h}

    e_star = {
        "hat_first": float(hat.mean()),
        "hat": q**h * hat_h,
        "tilde": til_h,
    }

    tilde_tilde = q**s * (_circ_quad(til, 0, til, s, til, h, til, s + h) - til_h**2)
    hat_tilde = q ** max(s, h) * (
        _circ_quad(hat, 0, hat, h, til, s, til, s + h) - hat_h * til_h
    )
    tilde_hat = q ** (s + h) * (
        _circ_quad(til, 0, til, h, hat, s, hat, s + h) - hat_h * til_h
    )
    quad_hat = _circ_quad(hat, 0, hat, s, hat, h, hat, s + h)
    if s < h:
        hat_hat = (
            q ** (s + h) * (quad_hat - hat_s**2)
            + (q**s * hat_s) ** 2
            - (q**h * hat_h) ** 2
        )
    else:
        hat_hat = q ** (s + h) * (quad_hat - hat_h**2)

    return StarMoments(
        h=h, s=s, theta=theta,
        e_star=e_star,
        cov_star={
            "tilde_tilde": tilde_tilde,
            "hat_tilde": hat_tilde,
            "tilde_hat": tilde_hat,
            "hat_hat": hat_hat,
        },
    )


def bootstrap_igram_statistics(ind: IndicatorSeries, g: WeightFunction,
                               plan: BootstrapPlan, kind: str = "gr",
                               grid: np.ndarray | None = None,
                               workers: int | None = None) -> np.ndarray:
    """sqrt(n/m)-scale bootstrap statistics for all plan.reps resamples.

    Each resample's discretized curve J* and the exact conditional
    expectation E* J* are built by the same cumulative Fourier-bin path, so
    their difference measures only the resampling fluctuation. kind "gr"
    records sqrt(n/m) sup|J* - E*J*|; "cvm" records (n/m) times the
    trapezoid integral of the squared difference.

    Replicates run on per-replicate derived streams in fixed chunks, so the
    returned array is identical for any worker count.
    """
    if kind not in ("gr", "cvm"):
        raise ValueError(f"unknown statistic kind {kind!r}")
    n = ind.n
    if plan.n != n:
        raise ValueError("plan.n must equal the indicator series length")
    if n < 4:
        raise ValueError("bootstrap igram needs n >= 4")
    grid = fourier_grid(n) if grid is None else _check_grid(grid)
    hat = _hat(ind)
    estar = estar_gamma_all(ind, plan.theta, n - 1)
    center = _discretized_from_gamma(estar, g, n, grid)
    rate_sq = n / ind.m

    def chunk(start: int, stop: int):
        out = np.empty(stop - start)
        for b in range(start, stop):
            idx = sb_indices(plan, b)
            diff = _discretized_values(hat[idx], ind.m, n, g, grid) - center
            if kind == "gr":
                out[b - start] = np.sqrt(rate_sq) * np.max(np.abs(diff))
            else:
                out[b - start] = rate_sq * np.trapezoid(diff * diff, grid)
        return out

    return np.concatenate(mc.map_chunks(chunk, plan.reps, workers))


def bootstrap_igram_quantile(ind: IndicatorSeries, g: WeightFunction,
                             plan: BootstrapPlan, kind: str, p: float,
                             workers: int | None = None) -> float:
    """Empirical p-quantile (order statistic ceil(p*B), no interpolation)
    of the bootstrap statistics."""
    stats = bootstrap_igram_statistics(ind, g, plan, kind, workers=workers)
    return mc.ceil_quantile(stats, p)


def statistics_to_csv(stats: np.ndarray) -> str:
    """Bootstrap distribution dump (replicate, statistic) for density plots."""
    lines = ["replicate,statistic"]
    for b, v in enumerate(np.asarray(stats, dtype=float)):
        lines.append(f"{b},{float(v)!r}")
    return "\n".join(lines) + "\n"
