"""Frequency-domain statistics for extreme events in stationary time series.

Estimation of the extremogram and the extremal periodogram, integrated
periodogram goodness-of-fit statistics (Grenander-Rosenblatt and
Cramer-von Mises), simulation of their Gaussian limit processes, and a
stationary-bootstrap quantile engine.
"""

from xgram.models import ModelSpec, Series, SimulationError, simulate
from xgram.extremal import (
    DegenerateThresholdError,
    ExtremeSet,
    ExtremogramEstimate,
    IndicatorSeries,
    ThresholdSpec,
    ThresholdTieError,
    fourth_order_extremogram,
    indicators,
    sample_extremogram,
    threshold_from_p0,
)
from xgram.spectral import (
    PeriodogramEstimate,
    WeightFunction,
    fourier_coeff,
    periodogram_at,
    periodogram_fourier,
    psi,
    psi_hat,
)
from xgram.igram import (
    CenteringCurve,
    IgramCurve,
    TestResult,
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
from xgram.limits import (
    LimitProcessSpec,
    bridge_sup_quantile,
    cvm_limit_quantile,
    eta_null_covariance,
    eta_null_covariance_iid,
    kolmogorov_cdf,
    kolmogorov_quantile,
    simulate_limit,
    simulate_limit_functionals,
)
from xgram.bootstrap import (
    BootstrapPlan,
    StarMoments,
    bootstrap_extremogram,
    bootstrap_igram_quantile,
    bootstrap_igram_statistics,
    estar_gamma,
    sb_indices,
    star_moments,
)

__version__ = "0.1.0"

__all__ = [
    "ModelSpec", "Series", "SimulationError", "simulate",
    "ExtremeSet", "ThresholdSpec", "IndicatorSeries", "ExtremogramEstimate",
    "DegenerateThresholdError", "ThresholdTieError",
    "threshold_from_p0", "indicators", "sample_extremogram", "fourth_order_extremogram",
    "WeightFunction", "PeriodogramEstimate",
    "periodogram_fourier", "periodogram_at", "psi", "psi_hat", "fourier_coeff",
    "IgramCurve", "CenteringCurve", "TestResult", "fourier_grid",
    "igram_continuous", "igram_discretized", "centering_monte_carlo",
    "exact_iid_center", "eta_null_center", "grs", "cvm", "standardized_igram",
    "LimitProcessSpec", "simulate_limit", "simulate_limit_functionals",
    "kolmogorov_cdf", "kolmogorov_quantile", "bridge_sup_quantile",
    "cvm_limit_quantile", "eta_null_covariance", "eta_null_covariance_iid",
    "BootstrapPlan", "StarMoments", "sb_indices", "bootstrap_extremogram",
    "estar_gamma", "star_moments", "bootstrap_igram_statistics",
    "bootstrap_igram_quantile",
]
