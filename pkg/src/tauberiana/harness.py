"""Verification suites and report emission.

Each suite turns an :class:`ExperimentConfig` into a
:class:`VerificationReport` holding per-grid records (x, S, main, residual,
ratio), optional fitted remainder exponents and named pass/fail verdicts.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import contour_lab, residue_engine, series_core, smoothing, special_fn
from .errors import ConfigError, InvalidParams, TauberianaError

SCHEMA_VERSION = 1
CSV_COLUMNS = ("x", "S", "main", "residual", "ratio")
POINTS_PER_DECADE = 64


def geometric_grid(x_min: float, x_max: float, points: int | None = None) -> np.ndarray:
    """Geometric grid from x_min to x_max; default 64 points per decade (endpoints included)."""
    if not (0 < x_min < x_max):
        raise InvalidParams("insufficient-grid", "need 0 < x_min < x_max")
    if points is None:
        points = int(round(POINTS_PER_DECADE * math.log10(x_max / x_min))) + 1
    if points < 2:
        raise InvalidParams("insufficient-grid", "need at least two grid points")
    grid = np.geomspace(x_min, x_max, points)
    grid[0], grid[-1] = x_min, x_max
    return grid


@dataclass
class ExperimentConfig:
    """A suite run: series, pole, optional growth hypothesis, grid and output.

    Attributes:
        suite: Suite name.
        series: Series specification (may be None for analytic-only suites).
        pole: Pole data or None.
        hypothesis: Growth hypothesis or None.
        grid: ``(x_min, x_max, points)`` with points None for the default density.
        band: Tolerance band for ratio verdicts.
        params: Suite-specific extras.
        threads: Worker count for grid evaluation.
        out_dir: Output directory or None.
        fmt: ``"csv"`` or ``"json"``.
    """

    suite: str
    series: series_core.SeriesSpec | None = None
    pole: residue_engine.PoleData | None = None
    hypothesis: contour_lab.HypothesisB | None = None
    grid: tuple[float, float, int | None] = (1e3, 1e6, None)
    band: float = 0.01
    params: dict = field(default_factory=dict)
    threads: int = 1
    out_dir: str | None = None
    fmt: str = "csv"

    def grid_points(self) -> np.ndarray:
        return geometric_grid(*self.grid)

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        """Build a config from its JSON object.

        Raises:
            ConfigError: ``parse-error`` on missing or malformed fields.
        """
        try:
            suite = str(obj["suite"])
            series = series_core.SeriesSpec.from_json(obj["series"]) if obj.get("series") else None
            pole = residue_engine.PoleData.from_json(obj["pole"]) if obj.get("pole") else None
            hyp = contour_lab.HypothesisB(**obj["hypothesis"]) if obj.get("hypothesis") else None
            g = obj.get("grid", {})
            grid = (float(g.get("x_min", 1e3)), float(g.get("x_max", 1e6)),
                    int(g["points"]) if g.get("points") is not None else None)
            out = obj.get("output", {})
            return cls(suite, series, pole, hyp, grid, float(obj.get("band", 0.01)),
                       dict(obj.get("params", {})), int(obj.get("threads", 1)),
                       out.get("dir"), out.get("format", "csv"))
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("parse-error", f"bad config field: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError("io-error", str(exc)) from exc
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("parse-error", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise ConfigError("parse-error", "config must be a JSON object")
        return cls.from_json(obj)


@dataclass
class FitResult:
    """Least-squares slope of log envelope against log x.

    Attributes:
        exponent: Fitted exponent.
        band: (low, high) two-standard-error band.
        points: Envelope points used.
        decades: Span of the fit in decades.
    """

    exponent: float
    band: tuple[float, float]
    points: int
    decades: float


@dataclass
class VerificationReport:
    """Outcome of a suite run.

    Attributes:
        suite: Suite name.
        records: Per-grid rows with keys x, S, main, residual, ratio.
        fit: Fitted remainder exponent, if reported.
        verdicts: Named boolean verdicts.
        details: Additional numbers worth reporting.
        notes: Free-form remarks (for example engineering-choice bands).
        runtime: Wall time in seconds.
    """

    suite: str
    records: list = field(default_factory=list)
    fit: FitResult | None = None
    verdicts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "passed": self.passed,
            "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            "fit": None if self.fit is None else {
                "exponent": self.fit.exponent, "band": list(self.fit.band),
                "points": self.fit.points, "decades": self.fit.decades},
            "details": _jsonable(self.details),
            "notes": list(self.notes),
            "runtime": self.runtime,
            "records": _jsonable(self.records),
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in self.records:
                w.writerow([repr(float(r[c])) for c in CSV_COLUMNS])

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.records:
            lines.append(",".join(repr(float(r[c])) for c in CSV_COLUMNS))
        return "\n".join(lines) + "\n"


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _records(grid, sums, main) -> list[dict]:
    out = []
    for x, s, mt in zip(grid.tolist(), np.real(sums).tolist(), np.asarray(main, dtype=float).tolist()):
        out.append({"x": x, "S": s, "main": mt, "residual": s - mt,
                    "ratio": s / mt if mt != 0 else (math.nan if s else 1.0)})
    return out


def fit_remainder_exponent(x, r, m: int = 1, window_decades: float = 0.5,
                           min_points: int = 8, min_decades: float = 2.0) -> FitResult | None:
    """Fit beta in |r(x)| ~ x^beta (log x)^{m-1} on a running-max envelope.

    The envelope at x is the maximum of |r|/(log x)^{m-1} over grid points in
    (x 10^{-window}, x]; it is formed only once a full window is available.
    Returns None unless at least ``min_points`` positive envelope values span
    ``min_decades`` decades.
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(r, dtype=float))
    if m > 1:
        y = y / np.log(x) ** (m - 1)
    start = x[0] * 10 ** window_decades
    lx, env = [], []
    for i in range(x.size):
        if x[i] < start * (1 - 1e-12):
            continue
        sel = (x > x[i] / 10 ** window_decades) & (x <= x[i])
        e = float(np.max(y[sel]))
        if e > 0:
            lx.append(math.log(x[i]))
            env.append(math.log(e))
    if len(lx) < min_points:
        return None
    lx, env = np.array(lx), np.array(env)
    decades = (lx[-1] - lx[0]) / math.log(10)
    if decades < min_decades - 1e-9:
        return None
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, env, rcond=None)
    slope = float(coef[0])
    dof = max(1, lx.size - 2)
    resid = env - A @ coef
    se = math.sqrt(float(resid @ resid) / dof / float(np.sum((lx - lx.mean()) ** 2)))
    return FitResult(slope, (slope - 2 * se, slope + 2 * se), int(lx.size), float(decades))


def _need(cfg: ExperimentConfig, *names: str) -> None:
    for n in names:
        if getattr(cfg, n) is None:
            raise ConfigError("parse-error", f"suite {cfg.suite!r} needs '{n}'")


def _grid_sums(cfg: ExperimentConfig):
    grid = cfg.grid_points()
    if grid.size < 4:
        raise InvalidParams("insufficient-grid", "need at least four grid points")
    stream = series_core.enumerate_terms(cfg.series, float(grid[-1]))
    table = series_core.partial_sum_table(stream, grid, threads=cfg.threads)
    return grid, stream, table


def run_weak_check(cfg: ExperimentConfig) -> VerificationReport:
    """Ratio S(x) / (c x^alpha (log x)^{m-1}) with c = g(alpha)/(alpha (m-1)!).

    The verdict ``converging`` holds when every last-quartile ratio is within
    ``cfg.band`` of 1.
    """
    t0 = time.perf_counter()
    _need(cfg, "series", "pole")
    pd = cfg.pole
    grid, _, table = _grid_sums(cfg)
    c = pd.leading() / (pd.alpha * math.factorial(pd.m - 1))
    main = c * grid ** pd.alpha * np.log(grid) ** (pd.m - 1)
    rep = VerificationReport("weak", _records(grid, table.sums, main))
    ratios = np.array([r["ratio"] for r in rep.records])
    q = max(1, grid.size // 4)
    worst = float(np.max(np.abs(ratios[-q:] - 1.0)))
    rep.verdicts["converging"] = worst <= cfg.band
    rep.details.update({"leading_constant": c, "last_quartile_max_deviation": worst,
                        "final_ratio": float(ratios[-1])})
    rep.notes.append("convergence band is an engineering choice; the limit theorem gives no rate")
    rep.runtime = time.perf_counter() - t0
    return rep


def run_strong_fit(cfg: ExperimentConfig) -> VerificationReport:
    """Fit the remainder exponent of S(x) - x^alpha P(log x).

    Verdict ``exponent_ceiling`` compares the fit with ``params.exponent_ceiling``
    (default alpha - delta/(kappa+1) + 0.15); the theory value and the
    counterexample value alpha - delta/(kappa + 1/2) are reported.
    """
    t0 = time.perf_counter()
    _need(cfg, "series", "pole", "hypothesis")
    pd, hyp = cfg.pole, cfg.hypothesis
    grid, _, table = _grid_sums(cfg)
    poly = residue_engine.residue_polynomial(pd)
    main = np.array([residue_engine.main_term(pd, x, poly=poly) for x in grid.tolist()])
    sums = np.real(table.sums)
    rep = VerificationReport("strong", _records(grid, sums, main))
    residual = sums - main
    theory = hyp.alpha - hyp.delta / (hyp.kappa + 1)
    ceiling = float(cfg.params.get("exponent_ceiling", theory + 0.15))
    rep.details.update({"theory_exponent": theory, "counterexample_exponent":
                        hyp.alpha - hyp.delta / (hyp.kappa + 0.5), "ceiling": ceiling,
                        "residue_polynomial": poly.coeffs.tolist()})
    fit = fit_remainder_exponent(grid, residual, pd.m)
    rep.fit = fit
    if fit is None:
        rep.notes.append("fit declined: residual envelope too short or identically zero")
        rep.verdicts["exponent_ceiling"] = bool(np.all(residual == 0))
    else:
        rep.verdicts["exponent_ceiling"] = fit.exponent <= ceiling
    rep.runtime = time.perf_counter() - t0
    return rep


def jump_statistic(stream: series_core.CoefficientStream, exponent: float) -> np.ndarray:
    """a_n / lambda_n^exponent, using lambda_n = n^q exactly for power-law index rules."""
    spec = stream.source
    q = series_core._spec_q(spec)
    if stream.index is not None and spec.kind in ("explicit-rule", "euler-product") and \
            np.array_equal(stream.lam, stream.index.astype(float) ** q):
        denom = stream.index.astype(float) ** (q * exponent)
    else:
        denom = stream.lam ** exponent
    return stream.a / denom


def run_pointwise_check(cfg: ExperimentConfig) -> VerificationReport:
    """sup_n a_n / (lambda_n^{alpha - delta/(kappa+1)} (log lambda_n)^{m-1}) and its stabilisation.

    The sample is split at three quarters of the log lambda range; the
    verdict passes when the supremum beyond the split is at most
    ``params.slack`` (default 1.05) times the supremum before it.
    ``params.kappa_shift`` perturbs kappa for negative controls.
    """
    t0 = time.perf_counter()
    _need(cfg, "series", "hypothesis")
    hyp = cfg.hypothesis
    kappa = hyp.kappa + float(cfg.params.get("kappa_shift", 0.0))
    expo = hyp.alpha - hyp.delta / (kappa + 1.0)
    stream = series_core.enumerate_terms(cfg.series, cfg.grid[1])
    lam, a = stream.lam, np.real(stream.a)
    keep = lam >= (3.0 if hyp.m > 1 else 1.0)
    st = series_core.CoefficientStream(stream.source, stream.x_max, lam[keep], stream.a[keep],
                                       index=None if stream.index is None else stream.index[keep])
    ratios = np.real(jump_statistic(st, expo))
    if hyp.m > 1:
        ratios = ratios / np.log(st.lam) ** (hyp.m - 1)
    rep = VerificationReport("pointwise")
    slack = float(cfg.params.get("slack", 1.05))
    if ratios.size == 0:
        sup, growth = 0.0, 1.0
    else:
        ll = np.log(st.lam)
        cut = ll[0] + 0.75 * (ll[-1] - ll[0])
        head, tail = ratios[ll < cut], ratios[ll >= cut]
        head_sup = float(np.max(np.abs(head))) if head.size else 0.0
        tail_sup = float(np.max(np.abs(tail))) if tail.size else 0.0
        sup = max(head_sup, tail_sup)
        growth = tail_sup / head_sup if head_sup > 0 else (1.0 if tail_sup == 0 else math.inf)
    rep.verdicts["stabilises"] = bool(growth <= slack)
    rep.details.update({"exponent": expo, "sup": sup, "growth_ratio": growth, "terms": int(ratios.size)})
    rep.runtime = time.perf_counter() - t0
    return rep


def spread_coefficients(stream: series_core.CoefficientStream, policy: str = "geometric") -> series_core.SeriesSpec:
    """Derived spec splitting each a_n into floor(a_n)+1 coefficients below 1.

    Piece j of term n is placed at lambda_n + j eps_n with
    eps_n = 2^{-n} min(lambda_{n+1} - lambda_n, 1)/((1 + a_n^2)(1 + floor(a_n))).

    Raises:
        InvalidParams: ``negative-coefficient`` or an unknown policy.
    """
    if policy != "geometric":
        raise InvalidParams("invalid-params", f"unknown spreading policy {policy!r}")
    if np.any(np.real(stream.a) < 0):
        raise InvalidParams("negative-coefficient", "spreading needs non-negative coefficients")
    base = stream.source.to_json()
    return series_core.SeriesSpec("derived", {"transform": "spread", "base": base, "x_max": stream.x_max,
                                              "policy": policy},
                                  nonneg=True, abscissa=stream.source.abscissa,
                                  tail_exponent=stream.source.tail_exponent)


def check_spread(base: series_core.CoefficientStream, spread: series_core.CoefficientStream,
                 exponent: float | None = None, max_checks: int = 2000) -> dict:
    """Range, ordering, block-sum and partial-sum invariants of a spread series.

    Returns a dict of named booleans plus worst deviations.
    """
    lam_b, a_b = base.lam, np.real(base.a)
    n = lam_b.size
    out: dict = {}
    v = np.real(spread.a)
    out["range"] = bool(np.all((v >= 0) & (v < 1)))
    off = spread.offset
    same = np.diff(spread.lam) == 0
    out["increasing"] = bool(np.all((np.diff(spread.lam) > 0) | (same & (np.diff(off) > 0))))
    gaps = np.append(np.diff(lam_b), np.inf)
    # pieces stay below min(lambda_{n+1}, lambda_n + 1)
    last_off = np.zeros(n)
    src = spread.index - 1
    np.maximum.at(last_off, src, off)
    out["interleaving"] = bool(np.all(last_off < np.minimum(gaps, 1.0)))
    ends = np.cumsum(np.bincount(src, minlength=n))
    starts = ends - np.bincount(src, minlength=n)
    block = np.array([math.fsum(v[i:j].tolist()) for i, j in zip(starts.tolist(), ends.tolist())])
    rel = np.abs(block - a_b) / np.maximum(np.abs(a_b), 1e-300)
    rel[a_b == 0] = np.abs(block[a_b == 0])
    out["block_sum_error"] = float(np.max(rel)) if n else 0.0
    out["block_sum"] = out["block_sum_error"] <= 1e-12
    # partial sums between the end of block n and lambda_{n+1}, for up to max_checks n
    worst = 0.0
    for k in np.unique(np.linspace(0, n - 1, min(n, max_checks)).astype(int)).tolist() if n else []:
        x = float(lam_b[k]) + 0.5 * (float(last_off[k]) + min(float(gaps[k]), 1.0))
        if x > min(base.x_max, spread.x_max):
            continue
        sb = series_core.partial_sum(base, x)[0]
        ss = series_core.partial_sum(spread, x)[0]
        worst = max(worst, abs(ss - sb) / max(abs(sb), 1e-300))
    out["partial_sum_error"] = float(worst)
    out["partial_sums"] = bool(worst <= 1e-12)
    if exponent is not None:
        stat = block / (base.index.astype(float) ** (series_core._spec_q(base.source) * exponent))
        out["fluctuation_min"] = float(np.min(stat)) if n else 0.0
        out["fluctuation_max"] = float(np.max(stat)) if n else 0.0
        out["fluctuation"] = bool(n and np.all(np.abs(stat - 1.0) <= 1e-12))
    return out


def _ingham(cfg: ExperimentConfig, rep: VerificationReport) -> None:
    grid, stream, table = _grid_sums(cfg)
    s = np.real(table.sums)
    main = grid + grid * np.cos(np.log(grid) - math.pi / 4) / math.sqrt(2)
    rep.records = _records(grid, s, main)
    norm = float(np.max(np.abs(s - main) / np.log(grid)))
    rep.details["max_residual_over_log"] = norm
    rep.verdicts["residual_bound"] = norm <= float(cfg.params.get("residual_bound", 5.0))
    lo = math.log(grid[0]) + 1e-9
    hi = lo + 2 * math.pi
    if math.exp(hi) > grid[-1]:
        raise InvalidParams("insufficient-grid", "grid must span a full period of log x")
    period = np.exp(np.linspace(lo, hi, 257))
    ps = series_core.partial_sum_table(stream, period, threads=cfg.threads)
    dev = (np.real(ps.sums) - period) / period
    osc = float(np.max(dev) - np.min(dev))
    rep.details["oscillation_range"] = osc
    rep.verdicts["oscillation"] = osc >= float(cfg.params.get("oscillation_min", 1.2))
    signs = []
    for k in range(0, 4):
        xp = math.exp(math.pi / 4 + 2 * math.pi * k)
        xm = math.exp(math.pi / 4 + math.pi + 2 * math.pi * k)
        if max(xp, xm) > grid[-1] or min(xp, xm) < 1.0:
            continue
        sp = (series_core.partial_sum(stream, xp)[0] - xp) / xp
        sm_ = (series_core.partial_sum(stream, xm)[0] - xm) / xm
        signs.append(sp * sm_ < 0)
    rep.details["extrema_sign_pairs"] = len(signs)
    rep.verdicts["extrema_signs"] = bool(signs) and all(signs)


def _karamata(cfg: ExperimentConfig, rep: VerificationReport) -> None:
    grid, stream, table = _grid_sums(cfg)
    s = np.real(table.sums)
    lg = np.log(grid)
    main = grid * lg + grid * (0.5 * np.sin(lg * lg) - 1.0)
    rep.records = _records(grid, s, main)
    norm = float(np.max(np.abs(s - main) * lg / grid))
    rep.details["max_normalised_residual"] = norm
    rep.verdicts["residual_bound"] = norm <= float(cfg.params.get("residual_bound", 10.0))
    two_term = np.abs(s - grid * lg + grid) / grid
    windows = []
    edge = grid[0]
    while edge * 10 ** 0.5 <= grid[-1] * (1 + 1e-12):
        sel = (grid >= edge) & (grid <= edge * 10 ** 0.5)
        windows.append(float(np.max(two_term[sel])))
        edge *= 10 ** 0.5
    rep.details["window_envelopes"] = windows
    rep.details["min_window_envelope"] = min(windows) if windows else 0.0
    rep.verdicts["two_term_failure"] = bool(windows) and max(windows) >= 0.3 and min(windows) >= 0.3


def _zetaderiv_params(cfg: ExperimentConfig) -> dict:
    p = dict(cfg.series.params) if cfg.series is not None and cfg.series.params.get("rule") == "zetaderiv" else {}
    p.setdefault("alpha", 1.0)
    p.setdefault("delta", 0.5)
    p.setdefault("kappa", 1.5)
    p.setdefault("m", 1)
    return p


def _unbounded(cfg: ExperimentConfig, rep: VerificationReport) -> None:
    p = _zetaderiv_params(cfg)
    spec = series_core.bundled_spec("zetaderiv", **{k: p[k] for k in ("alpha", "delta", "kappa", "m")})
    alpha, q, m = series_core._zetaderiv_shape(spec.params)
    s = alpha + 1.0
    val, err = series_core.evaluate_series(spec, s, 1e-10)
    w = 1.0 + q * (s - alpha)
    ref = (-1) ** (m - 1) * (special_fn.zeta_derivative(w, m - 1)[0] if m > 1 else special_fn.riemann_zeta(w)[0])
    rep.details["series_value"] = float(val.real)
    rep.details["zeta_value"] = float(ref.real)
    rep.verdicts["coefficient_formula"] = abs(val - ref) <= 1e-8
    stream = series_core.enumerate_terms(spec, cfg.grid[1])
    expo = alpha - spec.params["delta"] / (spec.params["kappa"] + 0.5)
    stat = np.real(jump_statistic(stream, expo))
    if m > 1:
        stat = stat / np.log(np.maximum(stream.index.astype(float), 2.0)) ** (m - 1)
        stat = stat[stream.index >= 2]
    rep.details["jump_min"] = float(np.min(stat))
    rep.details["jump_max"] = float(np.max(stat))
    rep.verdicts["jump_fluctuation"] = bool(np.all(stat == 1.0)) if m == 1 else \
        bool(np.all(np.abs(stat - 1.0) <= 1e-12))


def _bounded(cfg: ExperimentConfig, rep: VerificationReport) -> None:
    p = _zetaderiv_params(cfg)
    spec = cfg.series if cfg.series is not None else series_core.bundled_spec("zetaderiv")
    if spec.kind == "explicit-rule" and spec.params.get("rule") == "zetaderiv":
        spec = series_core.bundled_spec("zetaderiv", **{k: p[k] for k in ("alpha", "delta", "kappa", "m")})
    base = series_core.enumerate_terms(spec, cfg.grid[1])
    derived = spread_coefficients(base)
    spread = series_core.enumerate_terms(derived, cfg.grid[1])
    expo = None
    if spec.params.get("rule") == "zetaderiv" and int(p["m"]) == 1:
        expo = p["alpha"] - p["delta"] / (p["kappa"] + 0.5)
    checks = check_spread(base, spread, expo)
    for k, v in checks.items():
        if isinstance(v, bool):
            rep.verdicts[k] = v
        else:
            rep.details[k] = v
    rep.details["base_terms"] = len(base)
    rep.details["spread_terms"] = len(spread)
    rep.notes.append("spacing eps_n = 2^-n min(gap, 1)/((1 + a_n^2)(1 + floor a_n))")


COUNTEREXAMPLES = {"ingham": _ingham, "karamata": _karamata, "unbounded": _unbounded, "bounded": _bounded}


def counterexample_suite(name: str, cfg: ExperimentConfig) -> VerificationReport:
    """Run one of the ``ingham``, ``karamata``, ``unbounded``, ``bounded`` suites.

    Raises:
        ConfigError: ``unknown-suite``.
    """
    if name not in COUNTEREXAMPLES:
        raise ConfigError("unknown-suite", f"unknown counterexample {name!r}")
    t0 = time.perf_counter()
    if cfg.series is None and name in ("ingham", "karamata"):
        cfg = ExperimentConfig(**{**cfg.__dict__, "series": series_core.bundled_spec(name)})
    rep = VerificationReport(f"counterexample:{name}")
    COUNTEREXAMPLES[name](cfg, rep)
    rep.runtime = time.perf_counter() - t0
    return rep


# Thin suites mainly used from the command line.

def _suite_eval(cfg: ExperimentConfig) -> VerificationReport:
    _need(cfg, "series")
    rep = VerificationReport("eval")
    points = cfg.params.get("s", [2.0])
    target = float(cfg.params.get("tail_target", 1e-8))
    values = []
    for sv in points:
        s = complex(*sv) if isinstance(sv, (list, tuple)) else complex(sv)
        v, e = series_core.evaluate_series(cfg.series, s, target)
        values.append({"s": s, "value": v, "err": e})
    rep.details["values"] = values
    rep.verdicts["evaluated"] = True
    return rep


def _suite_partial_sum(cfg: ExperimentConfig) -> VerificationReport:
    _need(cfg, "series")
    grid, _, table = _grid_sums(cfg)
    if cfg.pole is not None:
        poly = residue_engine.residue_polynomial(cfg.pole)
        main = np.array([residue_engine.main_term(cfg.pole, x, poly=poly) if x >= 2 else math.nan
                         for x in grid.tolist()])
    else:
        main = np.zeros(grid.size)
    rep = VerificationReport("partial-sum", _records(grid, table.sums, main))
    if cfg.series.nonneg:
        rep.verdicts["monotone"] = bool(np.all(np.diff(np.real(table.sums)) >= 0))
    rep.details["max_error_bound"] = float(np.max(table.errs))
    return rep


def _suite_residue(cfg: ExperimentConfig) -> VerificationReport:
    _need(cfg, "pole")
    pd = cfg.pole
    rep = VerificationReport("residue")
    poly = residue_engine.residue_polynomial(pd)
    rep.details["alpha"] = pd.alpha
    rep.details["m"] = pd.m
    rep.details["residue_polynomial"] = poly.coeffs.tolist()
    if pd.g is not None:
        lau = residue_engine.laurent_coefficients(
            lambda w: pd.g(w) / (w - pd.alpha) ** pd.m, pd.alpha, pd.m, min(pd.radius, pd.alpha / 2))
        rep.details["laurent"] = np.real(lau.coeffs).tolist()
        rep.details["laurent_errors"] = lau.errs.tolist()
    lead = poly.coeffs[-1] * pd.alpha * math.factorial(pd.m - 1)
    rep.verdicts["leading_coefficient"] = abs(lead - pd.leading()) <= 1e-9 * max(1.0, abs(lead))
    return rep


def _weight_params(cfg: ExperimentConfig) -> smoothing.WeightParams:
    w = cfg.params.get("weight", {})
    return smoothing.WeightParams(float(w.get("x", 100.0)), float(w.get("y", 1.0)), float(w.get("eps", 0.05)),
                                  int(w.get("ell", 4)), str(w.get("sign", "+")))


def _suite_weights(cfg: ExperimentConfig) -> VerificationReport:
    wp = _weight_params(cfg)
    rng = np.random.default_rng(int(cfg.params.get("seed", 0)))
    n = int(cfg.params.get("samples", 100))
    s = rng.uniform(0, 3, n) + 1j * rng.uniform(-50, 50, n)
    u = np.linspace(math.log(wp.y) - 3 * wp.eps, math.log(wp.x) + 3 * wp.eps, 10_000)
    wr = smoothing.verify_weight_properties(wp, u, s)
    rep = VerificationReport("weights")
    rep.verdicts.update(wr.passed)
    rep.details["margins"] = wr.margins
    return rep


def _suite_perron(cfg: ExperimentConfig) -> VerificationReport:
    wp = _weight_params(cfg)
    name = cfg.params.get("evaluator", "zeta")
    A = contour_lab.zeta2_evaluator() if name == "zeta2" else contour_lab.zeta_evaluator()
    sigma = float(cfg.params.get("sigma", 2.0))
    budget = float(cfg.params.get("budget", 1e-6))
    res = contour_lab.perron_smoothed(A, wp, sigma, budget)
    direct, derr = contour_lab.smoothed_sum(A, wp)
    rep = VerificationReport("perron")
    rep.details.update({"value": res.value, "T": res.T, "tail": res.tail, "quad_err": res.quad_err,
                        "direct": direct})
    rep.verdicts["matches_direct_sum"] = abs(res.value - direct) <= res.total_error + derr
    if cfg.hypothesis is not None:
        shift = contour_lab.contour_shift_check(A, A.pole, cfg.hypothesis, wp, budget)
        rep.details.update({"shift_residual": shift.residual, "shift_budget": shift.budget})
        rep.verdicts["contour_shift"] = shift.passed
    return rep


def _suite_growth(cfg: ExperimentConfig) -> VerificationReport:
    rep = VerificationReport("growth")
    kind = cfg.params.get("kind", "zeta")
    if kind == "vertical":
        delta = float(cfg.params.get("delta", 0.3))
        t = [float(v) for v in cfg.params.get("t", [20, 30, 40])]
        prof = contour_lab.vertical_growth_profile(delta, t, threads=cfg.threads)
        rep.details.update({"t": prof.t, "ratios": prof.ratios, "c_fit": prof.c_fit})
        rep.verdicts["envelope"] = prof.verdict == "pass"
        return rep
    k = int(cfg.params.get("k", 0))
    strip = tuple(cfg.params.get("strip", [-0.5, -0.5]))
    t = np.linspace(float(cfg.params.get("t_min", 3.0)), float(cfg.params.get("t_max", 100.0)),
                    int(cfg.params.get("points", 98)))
    gr = special_fn.zeta_growth_check(k, strip, t)
    rep.details.update({"sup": gr.sup, "growth_ratio": gr.growth_ratio, "verdict": gr.verdict})
    rep.verdicts["stabilises"] = gr.verdict == "pass"
    return rep


def _suite_counterexample(cfg: ExperimentConfig) -> VerificationReport:
    name = cfg.params.get("name")
    if name is None:
        raise ConfigError("parse-error", "counterexample suite needs params.name")
    return counterexample_suite(name, cfg)


SUITES = {
    "eval": _suite_eval,
    "partial-sum": _suite_partial_sum,
    "residue": _suite_residue,
    "weights": _suite_weights,
    "perron": _suite_perron,
    "growth": _suite_growth,
    "weak": run_weak_check,
    "strong": run_strong_fit,
    "pointwise": run_pointwise_check,
    "counterexample": _suite_counterexample,
}


def run_suite(cfg: ExperimentConfig) -> VerificationReport:
    """Dispatch a config to its suite.

    Raises:
        ConfigError: ``unknown-suite``.
    """
    if cfg.suite not in SUITES:
        raise ConfigError("unknown-suite", f"unknown suite {cfg.suite!r}")
    t0 = time.perf_counter()
    rep = SUITES[cfg.suite](cfg)
    if not rep.runtime:
        rep.runtime = time.perf_counter() - t0
    return rep


def write_outputs(rep: VerificationReport, out_dir: str | Path, fmt: str = "csv") -> list[Path]:
    """Write the JSON report and, for csv format, the grid table."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        stem = rep.suite.replace(":", "_")
        paths = [out / f"{stem}.json"]
        paths[0].write_text(json.dumps(rep.to_json(), indent=2))
        if fmt == "csv":
            paths.append(out / f"{stem}.csv")
            rep.write_csv(paths[-1])
    except OSError as exc:
        raise ConfigError("io-error", str(exc)) from exc
    return paths


def run_config(path: str | Path, out_dir: str | None = None, threads: int | None = None,
               fmt: str | None = None, grid_override: dict | None = None) -> tuple[int, VerificationReport | None]:
    """Load, run and write a config. Exit status 0 on pass, 2 on any fail, 1 on error."""
    try:
        cfg = ExperimentConfig.load(path)
        if threads is not None:
            cfg.threads = threads
        if fmt is not None:
            cfg.fmt = fmt
        if out_dir is not None:
            cfg.out_dir = out_dir
        if grid_override:
            x_min, x_max, pts = cfg.grid
            cfg.grid = (float(grid_override.get("x_min") or x_min), float(grid_override.get("x_max") or x_max),
                        int(grid_override["points"]) if grid_override.get("points") else pts)
        rep = run_suite(cfg)
        if cfg.out_dir:
            write_outputs(rep, cfg.out_dir, cfg.fmt)
    except TauberianaError as exc:
        return 1, _error_report(exc)
    return (0 if rep.passed else 2), rep


def _error_report(exc: TauberianaError) -> VerificationReport:
    rep = VerificationReport("error")
    rep.details["code"] = exc.code
    rep.details["message"] = str(exc)
    return rep
