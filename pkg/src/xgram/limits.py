"""Gaussian limit processes of the integrated periodogram and their quantiles.

Four families, all of the form psi_0(x) Z_0 + 2 sum_h psi_h(x) Z_h with the
series truncated at H: a general correlated-Gaussian version, the
eta-dependent version (coefficients shifted to psi_{eta+h}), an
independent-coordinates version, and the iid case, where the process is a
rescaled Brownian bridge with closed-form supremum quantiles through the
Kolmogorov distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from xgram import mc
from xgram.extremal import IndicatorSeries, joint_tail_sum, sample_extremogram
from xgram.spectral import WeightFunction, psi_matrix

DEFAULT_BRIDGE_TRUNCATION = 10_000
DEFAULT_GENERAL_TRUNCATION = 200


def default_grid(points: int = 4096) -> np.ndarray:
    return np.linspace(0.0, np.pi, points + 1)


def _check_psd(cov: np.ndarray) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-10):
        raise ValueError("covariance must be symmetric")
    floor = -1e-8 * max(np.trace(cov), 1e-300)
    if np.linalg.eigvalsh(cov).min() < floor:
        raise ValueError("covariance is not positive semidefinite")
    return cov


def _cholesky_jittered(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    try:
        return np.linalg.cholesky(cov + 1e-12 * np.eye(cov.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance is not positive semidefinite") from exc


@dataclass(frozen=True, eq=False)
class LimitProcessSpec:
    """Which limit process to simulate, its truncation, weight, and grid.

    kinds: "general" (supplied covariance over lags 0..H), "eta_bar"
    (covariance of the H coordinates beyond lag eta), "independent"
    (independent Z_h with supplied variances), "bridge" (iid Z_h with
    standard deviation sigma = gamma_A(0)).
    """

    kind: str
    truncation: int
    g: WeightFunction
    grid: np.ndarray
    sigma: float | None = None
    eta: int | None = None
    cov: np.ndarray | None = None
    variances: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("general", "eta_bar", "independent", "bridge"):
            raise ValueError(f"unknown limit process kind {self.kind!r}")
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        grid = np.asarray(self.grid, dtype=float)
        if np.any(np.diff(grid) <= 0) or grid[0] < 0 or grid[-1] > np.pi + 1e-12:
            raise ValueError("grid must be increasing inside [0, pi]")
        object.__setattr__(self, "grid", grid)

    @classmethod
    def bridge(cls, sigma: float = 1.0, truncation: int = DEFAULT_BRIDGE_TRUNCATION,
               g: WeightFunction | None = None, grid=None) -> "LimitProcessSpec":
        if not sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        return cls("bridge", truncation, g or WeightFunction.one(),
                   default_grid() if grid is None else grid, sigma=float(sigma))

    @classmethod
    def general(cls, cov, truncation: int | None = None,
                g: WeightFunction | None = None, grid=None) -> "LimitProcessSpec":
        cov = _check_psd(cov)
        if truncation is None:
            truncation = cov.shape[0] - 1  # lags 0..H
        if cov.shape[0] != truncation + 1:
            raise ValueError("general covariance must cover lags 0..H")
        return cls("general", truncation, g or WeightFunction.one(),
                   default_grid() if grid is None else grid, cov=cov)

    @classmethod
    def eta_bar(cls, eta: int, cov, truncation: int | None = None,
                g: WeightFunction | None = None, grid=None) -> "LimitProcessSpec":
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        cov = _check_psd(cov)
        if truncation is None:
            truncation = cov.shape[0]
        if cov.shape[0] != truncation:
            raise ValueError("eta_bar covariance must cover the H coordinates")
        return cls("eta_bar", truncation, g or WeightFunction.one(),
                   default_grid() if grid is None else grid, eta=int(eta), cov=cov)

    @classmethod
    def independent_hat(cls, variances, g: WeightFunction | None = None,
                        grid=None) -> "LimitProcessSpec":
        v = np.asarray(variances, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("variances must be a nonempty vector")
        if np.any(v < 0):
            raise ValueError("variances must be nonnegative")
        return cls("independent", v.size, g or WeightFunction.one(),
                   default_grid() if grid is None else grid, variances=v)


def _is_uniform_from_zero(grid: np.ndarray) -> bool:
    if grid[0] != 0.0 or grid.size < 2:
        return False
    step = grid[1]
    return bool(np.allclose(grid, step * np.arange(grid.size), rtol=0.0, atol=1e-12)
                and abs(grid[-1] - np.pi) < 1e-12)


def _draw_z(spec: LimitProcessSpec, gen: np.random.Generator,
            rows: int, chol: np.ndarray | None) -> np.ndarray:
    if spec.kind == "bridge":
        return spec.sigma * gen.standard_normal((rows, spec.truncation))
    if spec.kind == "independent":
        return np.sqrt(spec.variances) * gen.standard_normal((rows, spec.truncation))
    dim = spec.cov.shape[0]
    return gen.standard_normal((rows, dim)) @ chol.T


def _paths_from_z(z: np.ndarray, spec: LimitProcessSpec) -> np.ndarray:
    """Evaluate psi_0 Z_0 + 2 sum psi_. Z_. for a batch of coefficient rows."""
    grid = spec.grid
    if spec.kind == "general":
        z0, zh = z[:, 0], z[:, 1:]
        shift = 0
    elif spec.kind == "eta_bar":
        z0, zh = None, z
        shift = spec.eta
    else:
        z0, zh = None, z
        shift = 0
    h = np.arange(1, zh.shape[1] + 1) + shift

    if spec.g.is_one and _is_uniform_from_zero(grid):
        # sin(h*pi*k/M) has period 2M in h: fold coefficients mod 2M, one rfft
        M = grid.size - 1
        npad = 2 * M
        coeff = np.zeros((z.shape[0], ((h[-1] + 1 + npad - 1) // npad) * npad))
        coeff[:, h] = zh / h
        folded = coeff.reshape(z.shape[0], -1, npad).sum(axis=1)
        paths = -2.0 * np.fft.rfft(folded, axis=1).imag[:, : grid.size]
    else:
        psi_all = psi_matrix(spec.g, int(h[-1]), grid)
        paths = 2.0 * (zh @ psi_all[h])
    if z0 is not None:
        paths = paths + np.outer(z0, psi_matrix(spec.g, 0, grid)[0])
    return paths


def simulate_limit(spec: LimitProcessSpec, seed: int, replicate: int = 0) -> np.ndarray:
    """One path of the truncated limit series on spec.grid."""
    chol = _cholesky_jittered(spec.cov) if spec.cov is not None else None
    gen = mc.stream(seed, replicate, mc.LIMIT)
    z = _draw_z(spec, gen, 1, chol)
    return _paths_from_z(z, spec)[0]


def simulate_limit_functionals(spec: LimitProcessSpec, reps: int, seed: int,
                               workers: int | None = None) -> dict[str, np.ndarray]:
    """sup|path| and integral of path^2 for reps independent paths.

    Paths are evaluated batch-wise (one FFT per chunk) but drawn from
    per-replicate streams, so results do not depend on chunking or workers.
    Returns arrays "sup_abs" and "square_integral" in replicate order.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    chol = _cholesky_jittered(spec.cov) if spec.cov is not None else None
    dim = spec.truncation + 1 if spec.kind == "general" else spec.truncation

    def chunk(start: int, stop: int):
        z = np.empty((stop - start, dim))
        for r in range(start, stop):
            z[r - start] = _draw_z(spec, mc.stream(seed, r, mc.LIMIT), 1, chol)[0]
        paths = _paths_from_z(z, spec)
        sup = np.max(np.abs(paths), axis=1)
        sq = np.trapezoid(paths * paths, spec.grid, axis=1)
        return sup, sq

    parts = mc.map_chunks(chunk, reps, workers)
    return {
        "sup_abs": np.concatenate([p[0] for p in parts]),
        "square_integral": np.concatenate([p[1] for p in parts]),
    }


def kolmogorov_cdf(x: float) -> float:
    """Kolmogorov distribution K(x) = 1 - 2 sum_j (-1)^(j-1) exp(-2 j^2 x^2).

    Series truncated once a term drops below 1e-12; clamped to [0, 1]
    against rounding of the alternating sum near 0.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    total = 0.0
    sign = 1.0
    for j in range(1, 100_000):
        term = np.exp(-2.0 * j * j * x * x)
        total += sign * term
        if term < 1e-12:
            break
        sign = -sign
    return float(min(max(1.0 - 2.0 * total, 0.0), 1.0))


def kolmogorov_quantile(p: float) -> float:
    """Inverse of kolmogorov_cdf on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    return float(brentq(lambda x: kolmogorov_cdf(x) - p, 1e-8, 10.0, xtol=1e-12))


def bridge_sup_quantile(p: float, sigma: float = 1.0) -> float:
    """Closed-form p-quantile of sup|bridge process| for g == 1.

    Var of the process is 2 sigma^2 x (pi - x), so it is a Brownian bridge
    time-changed to [0, pi] with scale sigma * sqrt(2*pi); the supremum is
    sigma * pi * sqrt(2) times a Kolmogorov variable.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return float(sigma * np.pi * np.sqrt(2.0) * kolmogorov_quantile(p))


def cvm_limit_quantile(p: float, sigma: float = 1.0, method: str = "chisq_series",
                       reps: int = 20_000, truncation: int = DEFAULT_BRIDGE_TRUNCATION,
                       seed: int = 0, coefficients: str = "derived",
                       workers: int | None = None) -> float:
    """Monte Carlo p-quantile of the integral of the squared bridge process.

    method "series_mc" integrates simulated paths; "chisq_series" samples
    sum_j c_j N_j^2. With coefficients "derived", c_j = 2*pi*sigma^2/j^2
    (this matches the simulated paths); "raw" uses c_j = 2/j^2, the
    documented but unnormalized variant kept for comparison only.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if sigma == 0.0:
        return 0.0
    if method == "series_mc":
        spec = LimitProcessSpec.bridge(sigma=sigma, truncation=truncation)
        sample = simulate_limit_functionals(spec, reps, seed, workers)["square_integral"]
        return mc.ceil_quantile(sample, p)
    if method != "chisq_series":
        raise ValueError(f"unknown method {method!r}")
    j = np.arange(1, truncation + 1)
    if coefficients == "derived":
        c = 2.0 * np.pi * sigma * sigma / (j * j)
    elif coefficients == "raw":
        c = 2.0 / (j * j)
    else:
        raise ValueError(f"unknown coefficients {coefficients!r}")

    def chunk(start: int, stop: int):
        out = np.empty(stop - start)
        for r in range(start, stop):
            nsq = mc.stream(seed, r, mc.LIMIT).standard_normal(truncation) ** 2
            out[r - start] = np.dot(c, nsq)
        return out

    sample = np.concatenate(mc.map_chunks(chunk, reps, workers))
    return mc.ceil_quantile(sample, p)


def unnormalized_sup_density(x) -> np.ndarray:
    """Series density 4 pi^-2 sum_j (-1)^(j+1) x exp(-j^2 x^2 / pi^2).

    Kept for comparison: it integrates to pi^2/6 rather than 1, so it is
    not the density of sup|bridge| (see bridge_sup_quantile for the
    derived law). Vectorized in x.
    """
    x = np.asarray(x, dtype=float)
    j = np.arange(1, 201)[:, None]
    terms = (-1.0) ** (j + 1) * x[None, :] * np.exp(-(j * j) * x[None, :] ** 2 / np.pi**2)
    return 4.0 / np.pi**2 * terms.sum(axis=0)


def eta_null_covariance_iid(gamma0: float, H: int) -> np.ndarray:
    """Limiting covariance of the lag estimates beyond eta for an iid
    series: diagonal with entries gamma_A(0)^2."""
    if not gamma0 > 0:
        raise ValueError("gamma0 must be positive")
    if H < 1:
        raise ValueError("H must be >= 1")
    return gamma0 * gamma0 * np.eye(H)


def eta_null_covariance(ind: IndicatorSeries, eta: int, H: int) -> np.ndarray:
    """Plug-in estimate of the eta-null covariance matrix over H lags.

    Entry (i, j), 1 <= i <= j <= H, is
    gamma(0) gamma(j-i) + sum_{t=1}^{eta-(j-i)} [gbar(t, eta+i, t+eta+j)
    + gbar(t, eta+j, t+eta+i)], with gamma from the sample extremogram and
    gbar the fourth-order plug-in at the actual lags (repeated lags
    collapse; the indicator product is idempotent).
    """
    if eta < 0 or H < 1:
        raise ValueError("need eta >= 0 and H >= 1")
    ext = sample_extremogram(ind, max_lag=min(H, ind.n - 1))
    gamma = np.zeros(H + 1)
    gamma[: ext.gamma.size] = ext.gamma
    cov = np.zeros((H, H))
    for i in range(1, H + 1):
        for j in range(i, H + 1):
            val = gamma[0] * gamma[j - i] if j - i <= H else 0.0
            for t in range(1, eta - (j - i) + 1):
                val += joint_tail_sum(ind, (t, eta + i, t + eta + j))
                val += joint_tail_sum(ind, (t, eta + j, t + eta + i))
            cov[i - 1, j - 1] = cov[j - 1, i - 1] = val
    return cov
