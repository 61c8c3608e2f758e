"""Command-line surface: reproducible estimation, testing, and export runs.

Every command resolves its parameters from flags, an optional JSON config
file (flags win), and the XGRAM_SEED fallback, then embeds the resolved
config in each artifact it writes, so any output can be regenerated
bit-for-bit from its own header.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from xgram import mc
from xgram.bootstrap import (
    BootstrapPlan,
    bootstrap_igram_statistics,
    statistics_to_csv,
)
from xgram.extremal import (
    DegenerateThresholdError,
    ExtremeSet,
    ThresholdTieError,
    indicators,
    sample_extremogram,
    threshold_from_p0,
)
from xgram.igram import (
    CenteringCurve,
    centering_monte_carlo,
    cvm,
    eta_null_center,
    fourier_grid,
    grs,
    igram_continuous,
    igram_discretized,
)
from xgram.limits import (
    DEFAULT_GENERAL_TRUNCATION,
    LimitProcessSpec,
    bridge_sup_quantile,
    cvm_limit_quantile,
    eta_null_covariance,
    simulate_limit_functionals,
)
from xgram.models import ModelSpec, Series, SimulationError, simulate
from xgram.spectral import WeightFunction, periodogram_fourier

# Derived-seed purpose for null-model statistic replicates (distinct from the
# mc purposes used by centering, limits, and bootstrap).
_NULL_MC_PURPOSE = 5


class UsageError(Exception):
    """Bad flags or config; exit code 1."""


class DataError(Exception):
    """Unusable input data; exit code 2."""


class NumericalError(Exception):
    """Computation cannot proceed; exit code 3."""


# Benchmark parameter sets accepted as --model shorthands.
MODEL_PRESETS = {
    "iid_t3": ModelSpec(kind="IidT", df=3.0),
    "arma11": ModelSpec(kind="Arma11", df=3.0, phi=0.8, theta_ma=0.1),
    "garch11": ModelSpec(kind="Garch11", df=4.0, omega=0.1, alpha1=0.1,
                         beta1=0.84, tail_index_alpha=3.49),
    "sv": ModelSpec(kind="SvLogNormal", df=3.6, ar_vol=0.9),
}

_CONFIG_KEYS = {
    "command", "input", "model", "n", "p0", "set", "g", "eta", "theta",
    "reps", "centering_reps", "level", "seed", "workers", "out", "centering",
    "variant", "grid_size", "null_reps", "self_center", "sigma",
    "truncation", "levels", "kind", "max_lag", "limit_reps",
}

_COMMANDS = ("simulate", "extremogram", "periodogram", "igram",
             "grtest", "cvmtest", "bootstrap", "limits")

_NEEDS_DATA = ("extremogram", "periodogram", "igram", "grtest", "cvmtest", "bootstrap")


@dataclass
class RunConfig:
    """Resolved parameters of one run; the embeddable reproducibility unit."""

    command: str
    input: str | None
    model: ModelSpec | None
    model_text: str | None
    n: int | None
    p0: float
    set_text: str
    g_text: str
    eta: int | None
    theta: float
    reps: int
    centering_reps: int
    level: float
    seed: int
    workers: int | None
    out: str
    centering: str
    variant: str
    grid_size: int | None
    null_reps: int
    self_center: bool
    sigma: float
    truncation: int | None
    levels: tuple
    kind: str
    max_lag: int | None
    limit_reps: int

    def embed(self) -> dict:
        """Everything that determines the output, sorted-key friendly.

        workers and out are excluded: neither affects artifact content.
        """
        d = {
            "command": self.command,
            "p0": self.p0,
            "set": self.set_text,
            "g": self.g_text,
            "theta": self.theta,
            "reps": self.reps,
            "centering_reps": self.centering_reps,
            "level": self.level,
            "seed": self.seed,
            "centering": self.centering,
            "variant": self.variant,
            "null_reps": self.null_reps,
            "self_center": self.self_center,
            "sigma": self.sigma,
            "levels": list(self.levels),
            "kind": self.kind,
            "limit_reps": self.limit_reps,
        }
        if self.input is not None:
            d["input"] = self.input
        if self.model is not None:
            d["model"] = self.model.to_dict()
        for key in ("n", "eta", "grid_size", "truncation", "max_lag"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d

    def comment(self) -> str:
        return "# config: " + json.dumps(self.embed(), sort_keys=True)


def ingest_csv(path: str) -> Series:
    """Read a one-column numeric CSV into a Series.

    Lines starting with '#' are skipped; the first non-comment line may be
    a header (auto-detected: it does not parse as a number). Row numbers in
    error messages are 1-based physical line numbers.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    values = []
    first = True
    for row, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        token = text.rstrip(",")
        if "," in token:
            raise DataError(f"{path}: expected one column, found several at row {row}")
        try:
            value = float(token)
        except ValueError:
            if first:
                first = False  # header
                continue
            raise DataError(f"{path}: non-numeric value {token!r} at row {row}") from None
        first = False
        if not np.isfinite(value):
            raise DataError(f"{path}: non-finite value at row {row}")
        values.append(value)
    if len(values) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(values)}")
    return Series(np.asarray(values), origin=f"file:{path}")


def parse_extreme_set(text: str) -> ExtremeSet:
    if text == "upper":
        return ExtremeSet.upper_tail()
    if text == "lower":
        return ExtremeSet.lower_tail()
    if text == "abs":
        return ExtremeSet.abs_tail()
    if text.startswith("interval:"):
        parts = text.split(":")[1:]
        if len(parts) != 2:
            raise UsageError(f"interval set needs two endpoints, got {text!r}")
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise UsageError(f"non-numeric interval endpoints in {text!r}") from None
        try:
            return ExtremeSet.interval(a, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(
        f"unknown set {text!r}; use upper, lower, abs, or interval:a:b"
    )


def parse_weight(text: str) -> WeightFunction:
    """'one' or a path to a two-column (lambda, value) CSV."""
    if text == "one":
        return WeightFunction.one()
    try:
        with open(text, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read weight file {text}: {exc}") from exc
    nodes, vals = [], []
    for row, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = [p for p in s.split(",") if p != ""]
        if len(parts) != 2:
            raise DataError(f"{text}: expected two columns at row {row}")
        try:
            nodes.append(float(parts[0]))
            vals.append(float(parts[1]))
        except ValueError:
            if not nodes:
                continue  # header
            raise DataError(f"{text}: non-numeric value at row {row}") from None
    try:
        return WeightFunction.tabulated(nodes, vals)
    except ValueError as exc:
        raise DataError(f"{text}: {exc}") from exc


def parse_model(text: str) -> ModelSpec:
    if text.lstrip().startswith("{"):
        try:
            return ModelSpec.from_json(text)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad model JSON: {exc}") from exc
    if text in MODEL_PRESETS:
        return MODEL_PRESETS[text]
    raise UsageError(
        f"unknown model {text!r}; use one of {sorted(MODEL_PRESETS)} or inline JSON"
    )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its fields")
    common.add_argument("--input", help="one-column CSV of observations")
    common.add_argument("--model", help="model preset name or inline ModelSpec JSON")
    common.add_argument("--n", type=int, help="sample length for simulated data")
    common.add_argument("--p0", type=float, help="nominal exceedance probability (default 0.05)")
    common.add_argument("--set", dest="set_text", metavar="SET",
                        help="extreme set: upper | lower | abs | interval:a:b")
    common.add_argument("--g", dest="g_text", metavar="G",
                        help="weight: 'one' or path to a lambda,value CSV")
    common.add_argument("--eta", type=int, help="null dependence order for centering")
    common.add_argument("--theta", type=float, help="bootstrap block parameter (default 1/50)")
    common.add_argument("--reps", type=int, help="bootstrap/limit replication count")
    common.add_argument("--centering-reps", type=int, dest="centering_reps",
                        help="Monte Carlo centering replicates (default 2000)")
    common.add_argument("--level", type=float, help="test level in (0,1) (default 0.05)")
    common.add_argument("--seed", type=int, help="base seed (fallback: XGRAM_SEED, then 0)")
    common.add_argument("--workers", type=int, help="parallel workers (default: all cores)")
    common.add_argument("--out", help="output directory (default .)")

    parser = _Parser(prog="xgram", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad config JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_cfg = _load_config_file(args.config) if args.config else {}

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        if key in file_cfg and file_cfg[key] is not None:
            return file_cfg[key]
        return default

    command = args.command
    seed = args.seed
    if seed is None:
        seed = file_cfg.get("seed")
    if seed is None:
        env = os.environ.get("XGRAM_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise UsageError(f"XGRAM_SEED must be an integer, got {env!r}") from None
    if seed is None:
        seed = 0

    model_text = pick(args.model, "model", None)
    model = None
    if model_text is not None:
        if isinstance(model_text, dict):  # config-file object form
            try:
                model = ModelSpec.from_dict(model_text)
            except (ValueError, TypeError) as exc:
                raise UsageError(f"bad model in config: {exc}") from exc
            model_text = model.to_json()
        else:
            model = parse_model(str(model_text))

    level = float(pick(args.level, "level", 0.05))
    if not 0.0 < level < 1.0:
        raise UsageError("level must lie in (0, 1)")
    theta = float(pick(args.theta, "theta", 1.0 / 50.0))
    default_reps = {"bootstrap": 4000, "limits": 20000}.get(command, 0)

    cfg = RunConfig(
        command=command,
        input=pick(args.input, "input", None),
        model=model,
        model_text=None if model_text is None else str(model_text),
        n=pick(args.n, "n", None),
        p0=float(pick(args.p0, "p0", 0.05)),
        set_text=str(pick(args.set_text, "set", "upper")),
        g_text=str(pick(args.g_text, "g", "one")),
        eta=pick(args.eta, "eta", None),
        theta=theta,
        reps=int(pick(args.reps, "reps", default_reps)),
        centering_reps=int(pick(args.centering_reps, "centering_reps", 2000)),
        level=level,
        seed=int(seed),
        workers=pick(args.workers, "workers", None),
        out=str(pick(args.out, "out", ".")),
        centering=str(file_cfg.get("centering", "empirical")),
        variant=str(file_cfg.get("variant", "continuous")),
        grid_size=file_cfg.get("grid_size"),
        null_reps=int(file_cfg.get("null_reps", 0)),
        self_center=bool(file_cfg.get("self_center", False)),
        sigma=float(file_cfg.get("sigma", 1.0)),
        truncation=file_cfg.get("truncation"),
        levels=tuple(file_cfg.get("levels", (0.90, 0.95, 0.99))),
        kind=str(file_cfg.get("kind", "gr")),
        max_lag=file_cfg.get("max_lag"),
        limit_reps=int(file_cfg.get("limit_reps", 20000)),
    )

    # The statistic kind IS the command for the two test commands; the kind
    # config key only steers the bootstrap command.
    if command == "grtest":
        cfg.kind = "gr"
    elif command == "cvmtest":
        cfg.kind = "cvm"

    if command == "simulate":
        if cfg.model is None:
            raise UsageError("simulate requires --model")
        if cfg.input is not None:
            raise UsageError("simulate takes --model, not --input")
    elif command in _NEEDS_DATA:
        if (cfg.input is None) == (cfg.model is None):
            raise UsageError("exactly one of --input and --model is required")
    elif command == "limits":
        if cfg.input is not None or cfg.model is not None:
            raise UsageError("limits takes neither --input nor --model")
    if cfg.model is not None and cfg.n is None:
        raise UsageError("--model requires --n")
    if cfg.n is not None and cfg.n < 2:
        raise UsageError("n must be at least 2")
    if not 0.0 < cfg.theta < 1.0:
        raise UsageError("theta must lie in (0, 1)")
    if cfg.kind not in ("gr", "cvm"):
        raise UsageError("kind must be gr or cvm")
    if cfg.variant not in ("continuous", "discretized"):
        raise UsageError("variant must be continuous or discretized")
    if cfg.centering not in ("none", "theoretical", "empirical"):
        raise UsageError("centering must be none, theoretical, or empirical")
    if cfg.eta is not None and cfg.eta < 0:
        raise UsageError("eta must be nonnegative")
    return cfg


def _write(cfg: RunConfig, name: str, text: str) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {path}")
    return path


def _load_series(cfg: RunConfig) -> Series:
    if cfg.input is not None:
        return ingest_csv(cfg.input)
    return simulate(cfg.model, cfg.n, cfg.seed)


def _grid(cfg: RunConfig, n: int) -> np.ndarray:
    if cfg.grid_size is None:
        return fourier_grid(n)
    if cfg.grid_size < 1:
        raise UsageError("grid_size must be positive")
    return np.linspace(0.0, np.pi, cfg.grid_size + 1)


def _prepare(cfg: RunConfig):
    series = _load_series(cfg)
    extreme_set = parse_extreme_set(cfg.set_text)
    thr = threshold_from_p0(series, extreme_set, cfg.p0)
    ind = indicators(series, thr, extreme_set, centering=cfg.centering)
    return series, extreme_set, thr, ind


def _curve(cfg: RunConfig, ind, ext_full, g, grid):
    if cfg.variant == "continuous":
        return igram_continuous(ext_full, g, grid)
    return igram_discretized(ind, g, grid)


def _resolve_center(cfg: RunConfig, curve, ext_full, extreme_set, g, grid):
    if cfg.self_center:
        return CenteringCurve(grid=grid, values=curve.values.copy(),
                              provenance="eta_partial_sum", variant=curve.variant,
                              eta=curve.n - 1)
    if cfg.eta is not None:
        return eta_null_center(ext_full, g, grid, eta=cfg.eta, variant=cfg.variant)
    if cfg.model is not None:
        return centering_monte_carlo(cfg.model, curve.n, cfg.p0, extreme_set, g,
                                     reps=cfg.centering_reps, seed=cfg.seed,
                                     centering=cfg.centering, variant=cfg.variant,
                                     grid=grid, workers=cfg.workers)
    raise UsageError(
        "ingested data needs --eta for a self-normalized centering "
        "(Monte Carlo centering requires --model)"
    )


def _limit_quantile(cfg: RunConfig, ind, ext_full, g, p: float) -> float:
    """Limit-law critical value matching the statistic's rate and centering."""
    gamma0 = float(ext_full.gamma[0])
    if not gamma0 > 0:
        raise NumericalError("gamma(0) is zero; the limit law degenerates")
    eta = 0 if cfg.self_center else (cfg.eta or 0)
    if eta == 0 and g.is_one:
        if cfg.kind == "gr":
            return bridge_sup_quantile(p, sigma=gamma0)
        return cvm_limit_quantile(p, sigma=gamma0, method="chisq_series",
                                  reps=cfg.limit_reps,
                                  seed=mc.child_seed(cfg.seed, mc.LIMIT),
                                  workers=cfg.workers)
    H = cfg.truncation if cfg.truncation is not None else DEFAULT_GENERAL_TRUNCATION
    try:
        cov = eta_null_covariance(ind, eta, H)
        spec = LimitProcessSpec.eta_bar(eta, cov, g=g)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"limit covariance failed: {exc}") from exc
    funcs = simulate_limit_functionals(spec, cfg.limit_reps,
                                       mc.child_seed(cfg.seed, mc.LIMIT),
                                       workers=cfg.workers)
    key = "sup_abs" if cfg.kind == "gr" else "square_integral"
    return mc.ceil_quantile(funcs[key], p)


def _null_mc_quantile(cfg: RunConfig, center, extreme_set, g, grid, p: float) -> float:
    """Null-model statistic quantile: re-simulate, re-estimate, re-test."""
    stat_fn = grs if cfg.kind == "gr" else cvm
    null_seed = mc.child_seed(cfg.seed, _NULL_MC_PURPOSE)
    per_replicate_center = center.provenance == "eta_partial_sum"

    def chunk(start: int, stop: int):
        out = np.empty(stop - start)
        for r in range(start, stop):
            series = simulate(cfg.model, cfg.n, null_seed, replicate=r)
            thr = threshold_from_p0(series, extreme_set, cfg.p0)
            ind = indicators(series, thr, extreme_set, centering=cfg.centering)
            ext = sample_extremogram(ind, max_lag=ind.n - 1)
            curve = _curve(cfg, ind, ext, g, grid)
            ctr = (eta_null_center(ext, g, grid, eta=center.eta, variant=cfg.variant)
                   if per_replicate_center else center)
            out[r - start] = stat_fn(curve, ctr).statistic
        return out

    stats = np.concatenate(mc.map_chunks(chunk, cfg.null_reps, cfg.workers))
    return mc.ceil_quantile(stats, p)


def _cmd_simulate(cfg: RunConfig) -> int:
    series = _load_series(cfg)
    lines = [cfg.comment(), "value"]
    lines.extend(repr(float(v)) for v in series.values)
    _write(cfg, "series.csv", "\n".join(lines) + "\n")
    return 0


def _cmd_extremogram(cfg: RunConfig) -> int:
    series, extreme_set, thr, ind = _prepare(cfg)
    ext = sample_extremogram(ind, max_lag=cfg.max_lag)
    header = (f"{cfg.comment()}\n# threshold: a_m={thr.a_m!r} m={thr.m!r} "
              f"p_hat={ind.p_hat!r}\n")
    _write(cfg, "extremogram.csv", header + ext.to_csv())
    return 0


def _cmd_periodogram(cfg: RunConfig) -> int:
    series, extreme_set, thr, ind = _prepare(cfg)
    per = periodogram_fourier(ind)
    _write(cfg, "periodogram.csv", cfg.comment() + "\n" + per.to_csv())
    return 0


def _cmd_igram(cfg: RunConfig) -> int:
    series, extreme_set, thr, ind = _prepare(cfg)
    grid = _grid(cfg, ind.n)
    ext_full = sample_extremogram(ind, max_lag=ind.n - 1)
    curve = _curve(cfg, ind, ext_full, g := parse_weight(cfg.g_text), grid)
    center = _resolve_center(cfg, curve, ext_full, extreme_set, g, grid)
    _write(cfg, "igram.csv", cfg.comment() + "\n" + curve.to_csv(center))
    return 0


def _cmd_test(cfg: RunConfig) -> int:
    series, extreme_set, thr, ind = _prepare(cfg)
    g = parse_weight(cfg.g_text)
    grid = _grid(cfg, ind.n)
    ext_full = sample_extremogram(ind, max_lag=ind.n - 1)
    curve = _curve(cfg, ind, ext_full, g, grid)
    center = _resolve_center(cfg, curve, ext_full, extreme_set, g, grid)
    result = (grs if cfg.kind == "gr" else cvm)(curve, center)

    p = 1.0 - cfg.level
    critical = {"limit": _limit_quantile(cfg, ind, ext_full, g, p)}
    if cfg.reps > 0:
        plan = BootstrapPlan(n=ind.n, theta=cfg.theta, reps=cfg.reps,
                             seed=mc.child_seed(cfg.seed, mc.RESAMPLING))
        stats = bootstrap_igram_statistics(ind, g, plan, cfg.kind, workers=cfg.workers)
        critical["bootstrap"] = mc.ceil_quantile(stats, p)
    if cfg.null_reps > 0 and cfg.model is not None:
        critical["null_mc"] = _null_mc_quantile(cfg, center, extreme_set, g, grid, p)

    reject = {src: bool(result.statistic > cv) for src, cv in critical.items()}
    report = {
        "config": cfg.embed(),
        "statistic": result.statistic,
        "kind": result.kind,
        "rate": result.rate,
        "centering": result.centering,
        "level": cfg.level,
        "critical_values": critical,
        "reject_by_source": reject,
        "reject": any(reject.values()),
        "threshold": {"a_m": thr.a_m, "m": thr.m, "p_hat": ind.p_hat},
    }
    _write(cfg, f"{cfg.command}.json", json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_bootstrap(cfg: RunConfig) -> int:
    series, extreme_set, thr, ind = _prepare(cfg)
    g = parse_weight(cfg.g_text)
    plan = BootstrapPlan(n=ind.n, theta=cfg.theta, reps=cfg.reps,
                         seed=mc.child_seed(cfg.seed, mc.RESAMPLING))
    stats = bootstrap_igram_statistics(ind, g, plan, cfg.kind, workers=cfg.workers)
    _write(cfg, "bootstrap_stats.csv", cfg.comment() + "\n" + statistics_to_csv(stats))
    p = 1.0 - cfg.level
    report = {
        "config": cfg.embed(),
        "kind": cfg.kind,
        "p": p,
        "quantile": mc.ceil_quantile(stats, p),
        "reps": cfg.reps,
        "theta": cfg.theta,
    }
    _write(cfg, "bootstrap_quantile.json",
           json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_limits(cfg: RunConfig) -> int:
    if not cfg.sigma > 0:
        raise UsageError("sigma must be positive")
    for p in cfg.levels:
        if not 0.0 < p < 1.0:
            raise UsageError("levels must lie in (0, 1)")
    H = cfg.truncation if cfg.truncation is not None else 10_000
    seed = mc.child_seed(cfg.seed, mc.LIMIT)
    spec = LimitProcessSpec.bridge(sigma=cfg.sigma, truncation=H)
    funcs = simulate_limit_functionals(spec, cfg.reps, seed, workers=cfg.workers)
    lines = [cfg.comment(), "p,quantile,method,H,reps,seed"]
    for p in cfg.levels:
        rows = [
            (bridge_sup_quantile(p, cfg.sigma), "sup_kolmogorov_closed_form", "", "", ""),
            (mc.ceil_quantile(funcs["sup_abs"], p), "sup_series_mc", H, cfg.reps, seed),
            (mc.ceil_quantile(funcs["square_integral"], p), "cvm_series_mc", H, cfg.reps, seed),
            (cvm_limit_quantile(p, cfg.sigma, method="chisq_series", reps=cfg.reps,
                                truncation=H, seed=seed, workers=cfg.workers),
             "cvm_chisq_series", H, cfg.reps, seed),
        ]
        for value, method, h_, r_, s_ in rows:
            lines.append(f"{p!r},{value!r},{method},{h_},{r_},{s_}")
    _write(cfg, "limit_quantiles.csv", "\n".join(lines) + "\n")
    return 0


_RUNNERS = {
    "simulate": _cmd_simulate,
    "extremogram": _cmd_extremogram,
    "periodogram": _cmd_periodogram,
    "igram": _cmd_igram,
    "grtest": _cmd_test,
    "cvmtest": _cmd_test,
    "bootstrap": _cmd_bootstrap,
    "limits": _cmd_limits,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _resolve(args)
        return _RUNNERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, DegenerateThresholdError, ThresholdTieError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, SimulationError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
