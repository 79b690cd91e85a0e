"""Data series behind the product and DGP figures, plus CSV/JSON writers."""

from __future__ import annotations

import json
import math
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special

from .dgp import DgpSpec, eval_path_recursive, sample_path
from .logmoments import SIGMA_LOG, mean_log_abs
from .montecarlo import MIN_SAMPLES
from .products import ProductConfig, be_bound_iid, sample_products, surrogate_product_law
from .rng import map_chunks, substream
from .signedlog import SignedLog
from .specfun import DomainError

FIGURE_IDS = ("1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b")
DEFAULT_N = 1_000_000

DEFAULTS = {
    "1a": {"sigma": 1.0, "layers": [1, 10, 30], "bins": 200},
    "1b": {"sigmas": [2.0, 2.5, 3.0], "max_layers": 30, "threshold": 0.5},
    "2a": {"sigma": 1.0, "max_layers": 30, "threshold": 0.5},
    "2b": {"sigma": 1.0, "max_layers": 30, "threshold": 0.5},
    "3a": {"sigma": 3.0, "layers": [1, 10, 30], "bins": 200},
    "3b": {"sigma": 3.0, "max_layers": 30, "threshold": 0.5},
    "4a": {"sigma": 1.0, "layers": 30, "paths": 5, "x_min": -2.0, "x_max": 2.0, "grid_points": 401},
    "4b": {"sigma": 2.5, "layers": 30, "paths": 5, "x_min": -2.0, "x_max": 2.0, "grid_points": 401},
}


@dataclass
class FigureData:
    figure_id: str
    columns: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"column lengths differ: {lengths}")

    def to_csv(self) -> str:
        names = list(self.columns)
        cols = [self.columns[k] for k in names]
        lines = [",".join(names)]
        for row in zip(*cols):
            lines.append(",".join(format_number(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "figure_id": self.figure_id,
            "meta": self.meta,
            "columns": {k: [_json_value(v) for v in col] for k, col in self.columns.items()},
        }
        return json.dumps(payload, indent=1, sort_keys=False)

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"figure_{self.figure_id}.csv"
        json_path = out / f"figure_{self.figure_id}.json"
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        json_path.write_text(self.to_json(), encoding="utf-8")
        return csv_path, json_path


def format_number(v) -> str:
    """Plain notation, switching to scientific below 1e-4 or above 1e6 in magnitude."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if v == 0.0:
        return "0"
    a = abs(v)
    if a < 1e-4 or a > 1e6:
        return f"{v:.12e}"
    return f"{v:.12g}"


def _json_value(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    return float(v)


def git_describe() -> str:
    try:
        res = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return res.stdout.strip() or "unknown"


def _signed_columns(name: str, v: SignedLog) -> dict[str, np.ndarray]:
    return {
        f"{name}_sign": np.asarray(v.sign, dtype=np.int64),
        f"{name}_logmag": np.asarray(v.log_mag, dtype=float),
    }


def _cumulative_log_abs(sigma: float, max_layers: int, n: int, seed: int, salt: int,
                        threads: int, stat):
    """Reduce ``stat(cumsum log|X|, ...)`` chunk by chunk; returns the summed stat."""
    def block(rng, m):
        x = rng.normal(0.0, sigma, size=(m, max_layers))
        with np.errstate(divide="ignore"):
            cum = np.cumsum(np.log(np.abs(x)), axis=1)
        return stat(cum)

    parts = map_chunks(block, n, seed, salt=salt, threads=threads)
    return np.sum(parts, axis=0)


def _histograms(params: dict, n: int, seed: int, threads: int, salt: int,
                log_scale: bool) -> dict[str, np.ndarray]:
    sigma, layers, bins = params["sigma"], list(params["layers"]), int(params["bins"])
    samples = {ell: sample_products(ProductConfig(ell, sigma), n, seed + ell, threads) for ell in layers}
    if log_scale:
        pooled = np.concatenate([s.log_mag for s in samples.values()])
        pooled = pooled[np.isfinite(pooled)]
        lo, hi = np.quantile(pooled, [0.005, 0.995])
        edges = np.linspace(lo, hi, bins + 1)
        cols = {"log_abs_center": 0.5 * (edges[:-1] + edges[1:])}
        for ell, s in samples.items():
            counts, _ = np.histogram(s.log_mag, bins=edges)
            cols[f"density_l{ell}"] = counts / (n * np.diff(edges))
        return cols
    ref = samples[layers[0]].to_real()
    q_lo, q_hi = np.quantile(ref, [0.005, 0.995])
    half = max(abs(q_lo), abs(q_hi))
    edges = np.linspace(-half, half, bins + 1)
    cols = {"center": 0.5 * (edges[:-1] + edges[1:])}
    for ell, s in samples.items():
        counts, _ = np.histogram(s.to_real(), bins=edges)
        cols[f"density_l{ell}"] = counts / (n * np.diff(edges))
    return cols


def _fig_1b(params, n, seed, threads):
    max_l = int(params["max_layers"])
    lt = math.log(params["threshold"])
    cols = {"layers": np.arange(1, max_l + 1)}
    for k, sigma in enumerate(params["sigmas"]):
        hits = _cumulative_log_abs(sigma, max_l, n, seed, 10 + k, threads,
                                   lambda cum: np.count_nonzero(cum <= lt, axis=0))
        p = hits / n
        cols[f"p_sigma_{sigma:g}"] = p
        cols[f"se_sigma_{sigma:g}"] = np.sqrt(p * (1 - p) / n)
    return cols


def _fig_2(params, n, seed, threads, log_scale):
    sigma = params["sigma"]
    max_l = int(params["max_layers"])
    lt = math.log(params["threshold"])
    m = mean_log_abs(sigma)
    ells = np.arange(1, max_l + 1)

    def stat(cum):
        scaled = (cum - ells * m) / np.sqrt(ells)
        return np.count_nonzero(scaled > lt, axis=0)

    p = _cumulative_log_abs(sigma, max_l, n, seed, 20, threads, stat) / n
    p_ln = np.full(max_l, 1.0 - special.ndtr(lt / SIGMA_LOG))
    cols = {"layers": ells, "p_empirical": p, "se_empirical": np.sqrt(p * (1 - p) / n),
            "p_lognormal": p_ln}
    if log_scale:
        with np.errstate(divide="ignore"):
            cols["log10_p_empirical"] = np.log10(p)
            cols["log10_p_lognormal"] = np.log10(p_ln)
    else:
        bound = np.array([be_bound_iid(ProductConfig(int(l), sigma)) for l in ells])
        cols["be_bound"] = bound
        cols["band_lower"] = np.clip(p_ln - bound, 0.0, 1.0)
        cols["band_upper"] = np.clip(p_ln + bound, 0.0, 1.0)
    return cols


def _fig_3b(params, n, seed, threads):
    sigma = params["sigma"]
    max_l = int(params["max_layers"])
    lt = math.log(params["threshold"])
    ells = np.arange(1, max_l + 1)
    hits = _cumulative_log_abs(sigma, max_l, n, seed, 30, threads,
                               lambda cum: np.count_nonzero(cum > lt, axis=0))
    p = hits / n
    laws = [surrogate_product_law(ProductConfig(int(l), sigma)) for l in ells]
    p_sur = np.array([1.0 - special.ndtr((lt - law.mu) / law.sd) for law in laws])
    bound = np.array([be_bound_iid(ProductConfig(int(l), sigma)) for l in ells])
    return {"layers": ells, "p_empirical": p, "se_empirical": np.sqrt(p * (1 - p) / n),
            "p_surrogate": p_sur, "be_bound": bound}


def _fig_4(params, seed):
    spec = DgpSpec.linear(int(params["layers"]), float(params["sigma"]))
    x = np.linspace(params["x_min"], params["x_max"], int(params["grid_points"]))
    cols = {"x": x}
    rng = substream(seed, 0, salt=40)
    for k in range(int(params["paths"])):
        path = sample_path(spec, rng)
        v = eval_path_recursive(spec, path, x)
        cols.update(_signed_columns(f"path{k}", v))
        cols[f"path{k}"] = np.asarray(v.to_real(), dtype=float)
    return cols


def figure_data(figure_id: str, overrides: dict | None = None, *, n: int = DEFAULT_N,
                seed: int = 0, threads: int = 1) -> FigureData:
    """Generate the data series for one figure panel.

    ``overrides`` replaces entries of the panel's default parameters (see
    ``DEFAULTS``); unknown keys are rejected.
    """
    if figure_id not in FIGURE_IDS:
        raise DomainError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
    params = dict(DEFAULTS[figure_id])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise DomainError(f"unknown parameter {key!r} for figure {figure_id}")
        params[key] = value
    if figure_id[0] != "4" and n < MIN_SAMPLES:
        raise DomainError(f"figure {figure_id} needs at least {MIN_SAMPLES} samples")

    if figure_id == "1a":
        cols = _histograms(params, n, seed, threads, salt=0, log_scale=False)
    elif figure_id == "3a":
        cols = _histograms(params, n, seed, threads, salt=0, log_scale=True)
    elif figure_id == "1b":
        cols = _fig_1b(params, n, seed, threads)
    elif figure_id in ("2a", "2b"):
        cols = _fig_2(params, n, seed, threads, log_scale=figure_id == "2b")
    elif figure_id == "3b":
        cols = _fig_3b(params, n, seed, threads)
    else:
        cols = _fig_4(params, seed)

    meta = {"seed": int(seed), "n": int(n) if figure_id[0] != "4" else int(params["paths"]),
            "params": params, "git_describe": git_describe()}
    return FigureData(figure_id, cols, meta)
