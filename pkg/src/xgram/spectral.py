"""Extremal periodogram and the cosine coefficient families psi, psi_hat, c_h.

The periodogram of the (possibly centered) extreme-event indicators is
I(lambda) = (m/n) |sum_t c_t e^{-it lambda}|^2, evaluated either in one FFT
at the Fourier frequencies 2*pi*j/n in (0, pi) or directly at any lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from xgram.extremal import IndicatorSeries

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Nonnegative weight g on [0, pi]: either g == 1 or a tabulated curve.

    Tabulated weights are linearly interpolated between nodes; beta is the
    declared Hölder exponent in (3/4, 1], recorded as metadata (it cannot
    be verified from samples).
    """

    kind: str
    nodes: np.ndarray | None = None
    values: np.ndarray | None = None
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("one", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not 0.75 < self.beta <= 1.0:
            raise ValueError("beta must lie in (3/4, 1]")
        if self.kind == "tabulated":
            nodes = np.asarray(self.nodes, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if nodes.ndim != 1 or nodes.size < 2 or nodes.shape != values.shape:
                raise ValueError("tabulated weight needs matching node/value arrays, length >= 2")
            if not np.all(np.diff(nodes) > 0):
                raise ValueError("nodes must be strictly increasing")
            if nodes[0] < 0 or nodes[-1] > np.pi:
                raise ValueError("nodes must lie in [0, pi]")
            if np.any(values < 0):
                raise ValueError("weight values must be nonnegative")
            object.__setattr__(self, "nodes", nodes)
            object.__setattr__(self, "values", values)

    @classmethod
    def one(cls) -> "WeightFunction":
        return cls("one")

    @classmethod
    def tabulated(cls, nodes, values, beta: float = 1.0) -> "WeightFunction":
        return cls("tabulated", nodes=np.asarray(nodes, float),
                   values=np.asarray(values, float), beta=beta)

    @property
    def is_one(self) -> bool:
        return self.kind == "one"

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if self.kind == "one":
            return np.ones_like(lam)
        # np.interp holds the end values constant outside the node range.
        return np.interp(lam, self.nodes, self.values)


@dataclass(frozen=True, eq=False)
class PeriodogramEstimate:
    """Periodogram ordinates on a strictly increasing grid inside (0, pi)."""

    frequencies: np.ndarray
    values: np.ndarray
    m: float
    n: int
    centering: str

    def __post_init__(self) -> None:
        if np.any(np.diff(self.frequencies) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if self.frequencies.size and not (
            self.frequencies[0] > 0 and self.frequencies[-1] < np.pi
        ):
            raise ValueError("frequencies must lie strictly inside (0, pi)")
        if np.any(self.values < -1e-12):
            raise ValueError("periodogram values must be nonnegative")

    def to_csv(self) -> str:
        lines = ["frequency,value"]
        for f, v in zip(self.frequencies, self.values):
            lines.append(f"{float(f)!r},{float(v)!r}")
        return "\n".join(lines) + "\n"


def periodogram_fourier(ind: IndicatorSeries) -> PeriodogramEstimate:
    """Periodogram at the Fourier frequencies 2*pi*j/n, 1 <= j < n/2.

    One length-n FFT of the centered indicators. The DC bin and (for even n)
    the bin at pi are dropped; the periodogram lives on (0, pi).
    """
    n = ind.n
    if n < 4:
        raise ValueError("periodogram needs n >= 4")
    c = ind.centered()
    f = np.fft.rfft(c)
    ncols = (n - 1) // 2
    j = np.arange(1, ncols + 1)
    values = (ind.m / n) * np.abs(f[1 : ncols + 1]) ** 2
    return PeriodogramEstimate(
        frequencies=TWO_PI * j / n, values=values, m=ind.m, n=n, centering=ind.centering
    )


def periodogram_at(ind: IndicatorSeries, lam: float) -> float:
    """Direct O(n) periodogram value at any lambda in [0, pi]."""
    if not 0.0 <= lam <= np.pi:
        raise ValueError("lambda must lie in [0, pi]")
    c = ind.centered()
    t = np.arange(1, ind.n + 1)
    s = np.dot(c, np.exp(-1j * t * lam))
    return float(ind.m / ind.n * np.abs(s) ** 2)


def psi(g: WeightFunction, h: int, x: float) -> float:
    """psi_h(x) = integral_0^x cos(h*lambda) g(lambda) d lambda.

    Closed form for g == 1; for tabulated weights the piecewise-linear
    antiderivative is evaluated exactly, segment by segment.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    if not 0.0 <= x <= np.pi + 1e-12:
        raise ValueError("x must lie in [0, pi]")
    if g.is_one:
        return float(x) if h == 0 else float(np.sin(h * x) / h)
    return float(_psi_matrix_tabulated(g, h, np.array([min(x, np.pi)]))[h, 0])


def riemann_index(x: float, n: int) -> int:
    """x_n = floor(n*x / 2*pi), nudged so Fourier grid points land exactly."""
    return int(np.floor(n * x / TWO_PI + 1e-9))


def psi_hat(g: WeightFunction, h: int, x: float, n: int) -> float:
    """Riemann-sum coefficient (2*pi/n) sum_{i=1}^{x_n} g(w_i) cos(h*w_i).

    w_i = 2*pi*i/n and x_n = floor(n*x/2*pi). Converges to psi_h(x) at rate
    O(1/n) for g == 1.
    """
    if n < 4:
        raise ValueError("psi_hat needs n >= 4")
    if h < 0:
        raise ValueError("h must be nonnegative")
    if not 0.0 <= x <= np.pi + 1e-12:
        raise ValueError("x must lie in [0, pi]")
    xn = riemann_index(x, n)
    if xn == 0:
        return 0.0
    w = TWO_PI * np.arange(1, xn + 1) / n
    return float(TWO_PI / n * np.dot(g(w), np.cos(h * w)))


def fourier_coeff(g: WeightFunction, h: int) -> float:
    """c_h(g) = integral over [0, pi] of cos(h*lambda) g(lambda).

    For g == 1: c_0 = pi and c_h = 0 for h >= 1.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    if g.is_one:
        return float(np.pi) if h == 0 else 0.0
    return psi(g, h, np.pi)


def psi_matrix(g: WeightFunction, max_h: int, grid: np.ndarray) -> np.ndarray:
    """psi_h(x) for h = 0..max_h on a grid, shape (max_h+1, len(grid)).

    Closed form for g == 1. For tabulated g the piecewise-linear
    antiderivative is accumulated segment by segment, which reproduces the
    quadrature values of psi to rounding but costs O(S*H) instead of one
    adaptive integration per (h, x).
    """
    grid = np.asarray(grid, dtype=float)
    if g.is_one:
        out = np.empty((max_h + 1, grid.size))
        out[0] = grid
        if max_h:
            h = np.arange(1, max_h + 1)[:, None]
            out[1:] = np.sin(h * grid[None, :]) / h
        return out
    return _psi_matrix_tabulated(g, max_h, grid)


def _segments(g: WeightFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breakpoints and per-segment linear coefficients (a + b*lam) covering
    [0, pi], with constant extension beyond the tabulated nodes."""
    lam = g.nodes
    val = g.values
    if lam[0] > 0:
        lam = np.concatenate([[0.0], lam])
        val = np.concatenate([[val[0]], val])
    if lam[-1] < np.pi:
        lam = np.concatenate([lam, [np.pi]])
        val = np.concatenate([val, [val[-1]]])
    b = np.diff(val) / np.diff(lam)
    a = val[:-1] - b * lam[:-1]
    return lam, a, b


def _psi_matrix_tabulated(g: WeightFunction, max_h: int, grid: np.ndarray) -> np.ndarray:
    lam, a, b = _segments(g)
    hs = np.arange(1, max_h + 1)[:, None] if max_h else np.empty((0, 1))

    def anti(a_, b_, x_):
        # antiderivative of cos(h lam)(a_ + b_ lam), rows h >= 1
        return (a_ + b_ * x_) * np.sin(hs * x_) / hs + b_ * np.cos(hs * x_) / hs**2

    pre = np.zeros((max_h, lam.size))
    pre0 = np.zeros(lam.size)
    for s in range(lam.size - 1):
        u, v = lam[s], lam[s + 1]
        if max_h:
            pre[:, s + 1] = pre[:, s] + (anti(a[s], b[s], v) - anti(a[s], b[s], u))[:, 0]
        pre0[s + 1] = pre0[s] + a[s] * (v - u) + 0.5 * b[s] * (v * v - u * u)

    seg = np.clip(np.searchsorted(lam, grid, side="right") - 1, 0, lam.size - 2)
    out = np.empty((max_h + 1, grid.size))
    for k, x in enumerate(grid):
        s = seg[k]
        u = lam[s]
        out[0, k] = pre0[s] + a[s] * (x - u) + 0.5 * b[s] * (x * x - u * u)
        if max_h:
            out[1:, k] = pre[:, s] + (anti(a[s], b[s], x) - anti(a[s], b[s], u))[:, 0]
    return out
