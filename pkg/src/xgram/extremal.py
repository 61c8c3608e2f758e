"""Extreme-event sets, thresholds, indicators, and the sample extremogram."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Reporting default; igram consumers pass max_lag = n - 1 explicitly.
def default_max_lag(n: int) -> int:
    return int(np.floor(10 * np.log10(n)))


class DegenerateThresholdError(ValueError):
    """Threshold leaves no usable exceedances."""


class ThresholdTieError(ValueError):
    """The order statistic cannot separate exceedances from the rest."""


@dataclass(frozen=True)
class ExtremeSet:
    """A set A bounded away from 0, expressed on the a_m-scaled axis.

    Four shapes: upper tail (1, inf), lower tail (-inf, -1), absolute tail
    {|x| > 1}, and a bounded interval (a, b) with 0 < a < b or a < b < 0.
    One-dimensional only.
    """

    kind: str
    a: float | None = None
    b: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("upper", "lower", "abs", "interval"):
            raise ValueError(f"unknown set kind {self.kind!r}")
        if self.kind == "interval":
            if self.a is None or self.b is None:
                raise ValueError("interval needs both endpoints")
            if not self.a < self.b:
                raise ValueError("interval needs a < b")
            if not (self.a > 0 or self.b < 0):
                raise ValueError("interval must be bounded away from 0")

    @classmethod
    def upper_tail(cls) -> "ExtremeSet":
        return cls("upper")

    @classmethod
    def lower_tail(cls) -> "ExtremeSet":
        return cls("lower")

    @classmethod
    def abs_tail(cls) -> "ExtremeSet":
        return cls("abs")

    @classmethod
    def interval(cls, a: float, b: float) -> "ExtremeSet":
        return cls("interval", a=float(a), b=float(b))

    def functional(self, values: np.ndarray) -> np.ndarray:
        """Map observations to the scalar whose upper order statistic sets a_m."""
        if self.kind == "upper":
            return values
        if self.kind == "lower":
            return -values
        if self.kind == "abs":
            return np.abs(values)
        # Interval thresholds scale off the end nearer to 0.
        return values if self.a > 0 else -values

    def contains(self, scaled: np.ndarray) -> np.ndarray:
        """Membership of values already divided by a_m."""
        if self.kind == "upper":
            return scaled > 1.0
        if self.kind == "lower":
            return scaled < -1.0
        if self.kind == "abs":
            return np.abs(scaled) > 1.0
        return (scaled > self.a) & (scaled < self.b)


@dataclass(frozen=True)
class ThresholdSpec:
    """Exceedance level a_m with its nominal probability p0 and m = 1/p0."""

    p0: float
    a_m: float
    m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p0 <= 0.5:
            raise ValueError("p0 must lie in (0, 0.5]")
        if not self.a_m > 0:
            raise ValueError("a_m must be positive")
        if not np.isclose(self.m * self.p0, 1.0):
            raise ValueError("m must equal 1/p0")


@dataclass(frozen=True, eq=False)
class IndicatorSeries:
    """0/1 extreme-event indicators with a declared centering.

    centering ``"none"`` keeps the raw indicators, ``"theoretical"``
    subtracts p0, and ``"empirical"`` subtracts the sample mean. The raw
    values are stored; ``centered()`` applies the offset.
    """

    raw: np.ndarray
    centering: str
    p0: float
    m: float

    def __post_init__(self) -> None:
        if self.centering not in ("none", "theoretical", "empirical"):
            raise ValueError(f"unknown centering {self.centering!r}")
        r = np.asarray(self.raw, dtype=np.float64)
        if r.ndim != 1 or r.size < 2:
            raise ValueError("indicator series must be one-dimensional, length >= 2")
        if not np.isin(r, (0.0, 1.0)).all():
            raise ValueError("raw indicators must be 0 or 1")
        object.__setattr__(self, "raw", r)

    @property
    def n(self) -> int:
        return int(self.raw.size)

    @property
    def p_hat(self) -> float:
        return float(self.raw.mean())

    def centered(self) -> np.ndarray:
        if self.centering == "none":
            return self.raw
        if self.centering == "theoretical":
            return self.raw - self.p0
        return self.raw - self.raw.mean()


@dataclass(frozen=True, eq=False)
class ExtremogramEstimate:
    """Sample extremogram gamma(h), h = 0..max_lag, and its standardization.

    rho is gamma/gamma(0), with rho(0) = 1; when gamma(0) == 0 the
    standardization is undefined and rho is None.
    """

    gamma: np.ndarray
    rho: np.ndarray | None
    centering: str
    m: float
    n: int

    @property
    def max_lag(self) -> int:
        return int(self.gamma.size - 1)

    def to_csv(self) -> str:
        lines = ["lag,gamma,rho"]
        for h in range(self.gamma.size):
            r = "" if self.rho is None else repr(float(self.rho[h]))
            lines.append(f"{h},{float(self.gamma[h])!r},{r}")
        return "\n".join(lines) + "\n"


def threshold_from_p0(series, extreme_set: ExtremeSet, p0: float) -> ThresholdSpec:
    """Threshold at the ceil(n(1-p0))-th ascending order statistic.

    Exceedance is strict, so ties at the threshold count as non-exceedances;
    a constant series therefore cannot be thresholded.
    """
    if not 0.0 < p0 <= 0.5:
        raise ValueError("p0 must lie in (0, 0.5]")
    values = np.asarray(series.values if hasattr(series, "values") else series, dtype=float)
    n = values.size
    if n * p0 < 1.0:
        raise DegenerateThresholdError(
            f"p0={p0} leaves fewer than one expected exceedance in n={n} observations"
        )
    y = extreme_set.functional(values)
    if np.min(y) == np.max(y):
        raise ThresholdTieError("constant series: all order statistics tie")
    k = int(np.ceil(n * (1.0 - p0)))
    a_m = float(np.partition(y, k - 1)[k - 1])
    if not (y > a_m).any():
        raise DegenerateThresholdError("no strict exceedances above the order statistic")
    if a_m <= 0:
        raise DegenerateThresholdError(
            f"order-statistic threshold {a_m} is not positive; the scaled set is undefined"
        )
    return ThresholdSpec(p0=p0, a_m=a_m, m=1.0 / p0)


def indicators(series, threshold: ThresholdSpec, extreme_set: ExtremeSet,
               centering: str = "none") -> IndicatorSeries:
    """0/1 indicators of {X_t / a_m in A} with the requested centering."""
    values = np.asarray(series.values if hasattr(series, "values") else series, dtype=float)
    raw = extreme_set.contains(values / threshold.a_m).astype(np.float64)
    return IndicatorSeries(raw=raw, centering=centering, p0=threshold.p0, m=threshold.m)


def lagged_product_sums(values: np.ndarray, max_lag: int) -> np.ndarray:
    """sum_{t=1}^{n-h} v_t v_{t+h} for h = 0..max_lag (non-circular).

    FFT path for large work, direct correlation otherwise; both give the
    same values to rounding.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    if not 0 <= max_lag < n:
        raise ValueError("max_lag must lie in [0, n)")
    if n * (max_lag + 1) <= 1 << 16:
        return np.correlate(v, v, mode="full")[n - 1 : n + max_lag]
    nfft = 1 << int(2 * n - 1).bit_length()
    f = np.fft.rfft(v, nfft)
    return np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1]


def circular_product_sums(values: np.ndarray, max_lag: int) -> np.ndarray:
    """sum_{t=1}^{n} v_t v_{(t+h) mod n} for h = 0..max_lag."""
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    if not 0 <= max_lag < n:
        raise ValueError("max_lag must lie in [0, n)")
    f = np.fft.rfft(v)
    return np.fft.irfft(f * np.conj(f), n)[: max_lag + 1]


def sample_extremogram(ind: IndicatorSeries, max_lag: int | None = None) -> ExtremogramEstimate:
    """Sample extremogram gamma(h) = (m/n) sum_{t=1}^{n-h} J_t J_{t+h}.

    J_t are the centered indicators. With centering "none" the estimate is
    nonnegative and gamma(0) = m * p_hat; lags run over the non-circular
    range 1..n-h.

    Parameters
    ----------
    ind : IndicatorSeries
    max_lag : int, optional
        Defaults to floor(10*log10(n)); pass n-1 for the full range.
    """
    n = ind.n
    if max_lag is None:
        max_lag = min(default_max_lag(n), n - 1)
    if not 0 <= max_lag < n:
        raise ValueError("max_lag must lie in [0, n)")
    c = ind.centered()
    gamma = (ind.m / n) * lagged_product_sums(c, max_lag)
    rho = gamma / gamma[0] if gamma[0] > 0 else None
    return ExtremogramEstimate(gamma=gamma, rho=rho, centering=ind.centering, m=ind.m, n=n)


def fourth_order_extremogram(ind: IndicatorSeries, u: int, s: int, t: int) -> float:
    """Plug-in estimate of the fourth-order joint tail quantity at lags (u, s, t).

    (m^2/n) sum_i I_i I_{i+u} I_{i+s} I_{i+t} over the raw indicators,
    for 0 < u < s < t.
    """
    if not 0 < u < s < t:
        raise ValueError("lags must satisfy 0 < u < s < t")
    return joint_tail_sum(ind, (u, s, t))


def joint_tail_sum(ind: IndicatorSeries, lags) -> float:
    """(m^2/n) sum_i I_i * prod_j I_{i+lag_j}, raw indicators, any lags >= 0.

    Tied lags collapse (indicators are idempotent); the sum runs while every
    index stays inside the sample.
    """
    uniq = sorted(set(int(L) for L in lags))
    if uniq and uniq[0] < 0:
        raise ValueError("lags must be nonnegative")
    n = ind.n
    top = uniq[-1] if uniq else 0
    if top >= n:
        raise ValueError("largest lag must be below n")
    r = ind.raw
    prod = r[: n - top].copy()
    for L in uniq:
        if L > 0:
            prod *= r[L : n - top + L]
    return float(ind.m * ind.m / n * prod.sum())
