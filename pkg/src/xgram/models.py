"""Seeded simulators for heavy-tailed benchmark time series.

Four generators share one noise construction (Student-t as a normal over a
scaled chi-square): an iid t sequence, a causal ARMA(1,1), a GARCH(1,1),
and a log-normal stochastic volatility model. All are pure functions of
(spec, n, seed) and simulate burn_in extra steps that are discarded.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.signal import lfilter

from xgram import mc

KINDS = ("IidT", "Arma11", "Garch11", "SvLogNormal")


class SimulationError(RuntimeError):
    """Raised when a recursion produces a non-finite state."""


@dataclass(frozen=True)
class ModelSpec:
    """Parameter set for one of the benchmark models.

    Parameters
    ----------
    kind : str
        One of ``IidT``, ``Arma11``, ``Garch11``, ``SvLogNormal``.
    df : float
        Degrees of freedom of the Student-t noise, > 0.
    phi, theta_ma : float
        AR and MA coefficients of the ARMA(1,1) recursion
        ``X_t = phi*X_{t-1} + theta_ma*Z_{t-1} + Z_t``; |phi| < 1 required.
    omega, alpha1, beta1 : float
        Nonnegative GARCH(1,1) parameters of
        ``sigma_t^2 = omega + alpha1*X_{t-1}^2 + beta1*sigma_{t-1}^2``.
        omega == 0 or alpha1 + beta1 >= 1 is allowed but flagged with a
        RuntimeWarning (the stationarity guard fails). GARCH innovations
        are the t noise rescaled to unit variance (the convention under
        which the documented tail indexes of such models hold), so
        Garch11 needs df > 2.
    ar_vol : float
        Log-volatility AR coefficient of
        ``log sigma_t = ar_vol*log sigma_{t-1} + eps_t`` with eps_t iid
        standard normal (variance 1) independent of the t noise; |ar_vol| < 1.
    burn_in : int
        Warm-up steps simulated and discarded.
    tail_index_alpha : float, optional
        Documented tail index of the model. Metadata only; never enters the
        recursions.
    """

    kind: str
    df: float = 3.0
    phi: float = 0.0
    theta_ma: float = 0.0
    omega: float = 1.0
    alpha1: float = 0.0
    beta1: float = 0.0
    ar_vol: float = 0.0
    burn_in: int = 1000
    tail_index_alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if not self.df > 0:
            raise ValueError("df must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.tail_index_alpha is not None and not self.tail_index_alpha > 0:
            raise ValueError("tail_index_alpha must be positive when given")
        if self.kind == "Arma11" and not abs(self.phi) < 1:
            raise ValueError("Arma11 requires |phi| < 1")
        if self.kind == "SvLogNormal" and not abs(self.ar_vol) < 1:
            raise ValueError("SvLogNormal requires |ar_vol| < 1")
        if self.kind == "Garch11":
            if min(self.omega, self.alpha1, self.beta1) < 0:
                raise ValueError("omega, alpha1, beta1 must be nonnegative")
            if not self.df > 2:
                raise ValueError("Garch11 needs df > 2 (unit-variance innovations)")
            if self.omega == 0 or self.alpha1 + self.beta1 >= 1:
                # Stationarity guard failed; simulation proceeds regardless.
                warnings.warn(
                    "Garch11 outside the stationarity region "
                    "(omega > 0 and alpha1 + beta1 < 1); simulating anyway",
                    RuntimeWarning,
                    stacklevel=2,
                )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown ModelSpec fields: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("ModelSpec JSON must be an object")
        return cls.from_dict(data)


@dataclass(frozen=True, eq=False)
class Series:
    """A finite, length >= 2 univariate sample with provenance."""

    values: np.ndarray
    origin: str = "unknown"

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("Series values must be one-dimensional")
        if v.size < 2:
            raise ValueError("Series needs at least 2 observations")
        if not np.isfinite(v).all():
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise ValueError(f"non-finite value at index {bad}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)


def student_t(generator: np.random.Generator, df: float, size: int) -> np.ndarray:
    """Student-t draws via the normal / sqrt(chi-square/df) ratio.

    Single place where t noise is constructed, so every model consumes the
    generator identically.
    """
    z = generator.standard_normal(size)
    return z / np.sqrt(generator.chisquare(df, size) / df)


def simulate(spec: ModelSpec, n: int, seed: int, replicate: int = 0) -> Series:
    """Simulate n observations of the model after burn_in discarded steps.

    Deterministic given (spec, n, seed, replicate); replicate selects an
    independent stream for Monte Carlo loops. Initial states are X_0 = 0,
    sigma_0^2 = omega/(1 - alpha1 - beta1) (or omega if the guard fails)
    and log sigma_0 = 0.

    Raises
    ------
    SimulationError
        If the recursion produces a non-finite value; the message names the
        first bad index.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    total = n + spec.burn_in
    noise = mc.stream(seed, replicate, mc.NOISE)
    z = student_t(noise, spec.df, total)

    if spec.kind == "IidT":
        x = z
    elif spec.kind == "Arma11":
        x = lfilter([1.0, spec.theta_ma], [1.0, -spec.phi], z)
    elif spec.kind == "Garch11":
        # innovations standardized to unit variance; see ModelSpec docs
        x = _garch_path(spec, z * np.sqrt((spec.df - 2.0) / spec.df))
    else:
        eps = mc.stream(seed, replicate, mc.VOLATILITY).standard_normal(total)
        log_sigma = lfilter([1.0], [1.0, -spec.ar_vol], eps)
        x = np.exp(log_sigma) * z

    if not np.isfinite(x).all():
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise SimulationError(
            f"{spec.kind} simulation produced a non-finite value at index {bad} "
            f"(before burn-in removal)"
        )
    return Series(x[spec.burn_in :], origin=f"simulated:{spec.kind}:seed={seed}")


def _garch_path(spec: ModelSpec, z: np.ndarray) -> np.ndarray:
    denom = 1.0 - spec.alpha1 - spec.beta1
    sigma2 = spec.omega / denom if denom > 0 else spec.omega
    x = np.empty_like(z)
    x_prev = 0.0
    for t in range(z.size):
        sigma2 = spec.omega + spec.alpha1 * x_prev * x_prev + spec.beta1 * sigma2
        x_prev = np.sqrt(sigma2) * z[t]
        x[t] = x_prev
    return x
